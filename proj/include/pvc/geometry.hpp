#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "pvc/constants.hpp"
#include "pvc/sampling.hpp"
#include "pvc/stats.hpp"
#include "pvc/vec.hpp"

namespace pvc {

/// Barycentric strictness tolerance for origin_in_hull.
inline constexpr double kHullTolerance = 1e-12;

/// d-volume of the simplex spanned by d+1 points of R^d.
double simplex_volume(std::span<const Vec> points);

/// Center of the sphere through the origin and the d given points:
/// solves <x_i, c> = |x_i|^2 / 2. Throws SingularConfiguration.
Vec circumcenter_with_origin(std::span<const Vec> nuclei);

/// Non-throwing form used in hot loops.
std::optional<Vec> try_circumcenter_with_origin(std::span<const Vec> nuclei);

/// v - <v, u0> u0. Throws NotUnit unless |u0| = 1 within 1e-12.
Vec project_onto_complement(const Vec& u0, const Vec& v);

struct HullTest {
  bool inside = false;
  bool degenerate = false;  // singular system or a barycentric weight within tolerance of 0
};

/// Whether the origin lies in the relative interior of the convex hull of d
/// points of R^d that span (at most) a common hyperplane through 0. Solves
/// [p_1 ... p_d; 1 ... 1] lambda = (0, ..., 0, 1) and requires every
/// lambda_i > kHullTolerance.
HullTest origin_in_hull(std::span<const Vec> points);

/// Pointy test for a vertex c determined by the origin and the d nuclei:
/// project u_i = (x_i - c)/|x_i - c| onto (c/|c|)^perp and test origin_in_hull.
/// Throws ZeroVertex when |c| < 1e-12.
HullTest classify_pointy(const Vec& c, std::span<const Vec> nuclei);

inline bool is_pointy(const Vec& c, std::span<const Vec> nuclei) {
  return classify_pointy(c, nuclei).inside;
}

/// Two balls whose boundaries both pass through the origin.
struct BallPairConfig {
  double r = 1;        // smaller radius
  double r_prime = 1;  // larger radius
  double delta = 0;    // distance between the centers
};

/// Lower bound kappa_d r^d/2 + kappa_d r'^d/2 + kappa_{d-1} r^{d-1} delta/(2d)
/// on the volume of the union, valid when delta^2 >= r'^2 - r^2.
double union_ball_volume_lower_bound(const BallPairConfig& cfg, Dim d);

/// Monte Carlo m_alpha-measure of B_r(center1) U B_r'(center2).
MCEstimate mc_union_ball_volume(const Vec& center1, double r, const Vec& center2, double r_prime,
                                const IntensityModel& model, std::int64_t n, std::uint64_t seed);

}  // namespace pvc
