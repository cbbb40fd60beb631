#pragma once

// Closed-form constants for the tail of the maximal nucleus-to-vertex
// distance of the typical Poisson-Voronoi cell, for the homogeneous model
// and for the radial-power intensity |x|^alpha dx.
//
// Everything is evaluated in log space through lgamma and exponentiated
// last, so dimensions up to kMaxDim stay finite.

namespace pvc {

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 12;

/// Ambient dimension, validated to lie in [kMinDim, kMaxDim].
class Dim {
 public:
  explicit Dim(int d);
  int value() const noexcept { return d_; }
  operator int() const noexcept { return d_; }

 private:
  int d_;
};

/// Throws AlphaOutOfRange unless alpha > -d.
void check_alpha(Dim d, double alpha);

/// Volume of the d-dimensional unit ball, kappa_d.
double unit_ball_volume(Dim d);

/// kappa_k for any k >= 0 (kappa_0 = 1, kappa_1 = 2).
double unit_ball_volume_any(int k);

/// Surface area of the unit sphere in R^d, d * kappa_d.
double unit_sphere_area(Dim d);

/// Conditioned mean simplex volume C_d.
double c_d(Dim d);

/// Intensity of a unit ball adjacent to the origin under |x|^alpha dx.
double k_d_alpha(Dim d, double alpha);

/// C_{d,alpha}; reduces to c_d at alpha = 0.
double c_d_alpha(Dim d, double alpha);

/// Upper incomplete gamma Gamma(s, x) for integer s >= 1 by its finite sum.
double upper_incomplete_gamma_int(int s, double x);

/// Exact mean number of pointy vertices of the origin's cell at distance >= t.
double expected_pointy_count(Dim d, double alpha, double t);

/// Leading-order approximation of P(D_alpha >= t) as t grows.
double tail_asymptotic(Dim d, double alpha, double t);

/// Coefficient of t^{(d+alpha)(d-1)} exp(-K t^{d+alpha}) in tail_asymptotic.
double tail_prefactor(Dim d, double alpha);

/// Same coefficient written in the explicit power-of-two / gamma-ratio form.
double tail_prefactor_explicit(Dim d, double alpha);

struct ExtremalConstants {
  double alpha1;        // Gumbel centring constant for the box maximum
  double alpha1_prime;  // centring constant implied by the marginal tail
  double theta;         // alpha1 / alpha1_prime
};

/// Normalization constants of the box-maximum limit; theta == 1/(2d).
ExtremalConstants extremal_norm_constants(Dim d);

/// Mean volume of a simplex with d+1 i.i.d. uniform vertices on the sphere.
double miles_mean_simplex_volume(Dim d);

/// Probability that d i.i.d. projected sphere points surround the origin.
double wendel_probability(Dim d);

/// E[volume | pointy] / E[volume]; never below 1.
double conditional_mean_ratio(Dim d);

}  // namespace pvc
