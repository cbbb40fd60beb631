#include "pvc/constants.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pvc/error.hpp"

namespace pvc {

namespace {

constexpr double kPi = std::numbers::pi;

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

double log_factorial(int n) { return std::lgamma(n + 1.0); }

double log_kappa(int k) { return 0.5 * k * std::log(kPi) - std::lgamma(0.5 * k + 1.0); }

double log_c_d(int d) {
  const double dd = d;
  return dd * std::lgamma(dd / 2) - (dd - 1) * std::log(2.0) - 0.5 * std::log(kPi) -
         log_factorial(d - 1) - (dd - 1) * std::lgamma((dd + 1) / 2);
}

double log_k_d_alpha(int d, double alpha) {
  const double dd = d;
  return std::log(dd - 1) + log_kappa(d - 1) + (dd + alpha - 1) * std::log(2.0) -
         std::log(dd + alpha) + log_beta((dd - 1) / 2, (dd + alpha + 1) / 2);
}

double log_c_d_alpha(int d, double alpha) {
  const double dd = d;
  return (dd * dd + dd * (alpha - 2) + 1) * std::log(2.0) - 0.5 * dd * std::log(kPi) -
         log_factorial(d - 1) + std::lgamma(dd / 2) + dd * log_beta((dd + alpha) / 2, dd / 2) -
         log_beta((dd + alpha) / 2, 0.5);
}

// log of (d kappa_d)^{d+1} C_{d,alpha} / (d + alpha)
double log_count_scale(int d, double alpha) {
  const double dd = d;
  return (dd + 1) * (std::log(dd) + log_kappa(d)) + log_c_d_alpha(d, alpha) - std::log(dd + alpha);
}

}  // namespace

Dim::Dim(int d) : d_(d) {
  if (d < kMinDim || d > kMaxDim) {
    throw Error(ErrorCode::InvalidDimension,
                "dimension " + std::to_string(d) + " outside [" + std::to_string(kMinDim) + ", " +
                    std::to_string(kMaxDim) + "]");
  }
}

void check_alpha(Dim d, double alpha) {
  if (!std::isfinite(alpha) || !(alpha > -static_cast<double>(d.value()))) {
    throw Error(ErrorCode::AlphaOutOfRange,
                "alpha = " + std::to_string(alpha) + " must exceed -d = " + std::to_string(-d.value()));
  }
}

double unit_ball_volume(Dim d) { return std::exp(log_kappa(d)); }

double unit_ball_volume_any(int k) { return std::exp(log_kappa(k)); }

double unit_sphere_area(Dim d) { return d * unit_ball_volume(d); }

double c_d(Dim d) { return std::exp(log_c_d(d)); }

double k_d_alpha(Dim d, double alpha) {
  check_alpha(d, alpha);
  return std::exp(log_k_d_alpha(d, alpha));
}

double c_d_alpha(Dim d, double alpha) {
  check_alpha(d, alpha);
  return std::exp(log_c_d_alpha(d, alpha));
}

double upper_incomplete_gamma_int(int s, double x) {
  if (s < 1) throw Error(ErrorCode::ConditionViolated, "incomplete gamma needs integer s >= 1");
  if (!(x >= 0)) throw Error(ErrorCode::ConditionViolated, "incomplete gamma needs x >= 0");
  // (s-1)! e^{-x} sum_{i<s} x^i / i!, terms accumulated as x^i/i!.
  double term = 1.0;
  double sum = 1.0;
  for (int i = 1; i < s; ++i) {
    term *= x / i;
    sum += term;
  }
  return std::exp(log_factorial(s - 1) - x) * sum;
}

double expected_pointy_count(Dim d, double alpha, double t) {
  check_alpha(d, alpha);
  if (!(t >= 0)) throw Error(ErrorCode::NegativeThreshold, "threshold t must be >= 0");
  const double k = std::exp(log_k_d_alpha(d, alpha));
  const double x = k * std::pow(t, d + alpha);
  // Gamma(d, x) = (d-1)! e^{-x} sum_i x^i/i!; keep e^{-x} in log space.
  double term = 1.0;
  double sum = 1.0;
  for (int i = 1; i < d; ++i) {
    term *= x / i;
    sum += term;
  }
  const double log_value =
      log_count_scale(d, alpha) + log_factorial(d - 1) - x - d * std::log(k) + std::log(sum);
  return std::exp(log_value);
}

double tail_prefactor(Dim d, double alpha) {
  check_alpha(d, alpha);
  return std::exp(log_count_scale(d, alpha) - log_k_d_alpha(d, alpha));
}

double tail_prefactor_explicit(Dim d, double alpha) {
  check_alpha(d, alpha);
  const double dd = d;
  const double log_value = (dd * dd + dd * (alpha - 2) - (alpha - 2)) * std::log(2.0) +
                           0.5 * dd * (dd - 1) * std::log(kPi) - log_factorial(d - 1) +
                           (dd - 1) * (std::lgamma((dd + alpha) / 2) - std::lgamma(dd + alpha / 2));
  return std::exp(log_value);
}

double tail_asymptotic(Dim d, double alpha, double t) {
  check_alpha(d, alpha);
  if (!(t > 0)) throw Error(ErrorCode::NegativeThreshold, "threshold t must be > 0");
  const double p = d + alpha;
  const double k = std::exp(log_k_d_alpha(d, alpha));
  const double log_value = log_count_scale(d, alpha) - std::log(k) + p * (d - 1) * std::log(t) -
                           k * std::pow(t, p);
  return std::exp(log_value);
}

ExtremalConstants extremal_norm_constants(Dim d) {
  const double dd = d;
  const double log_alpha1 =
      -log_factorial(d) +
      (dd - 1) * (0.5 * std::log(kPi) + std::lgamma(dd / 2 + 1) - std::lgamma((dd + 1) / 2));
  const double log_alpha1_prime = dd * std::log(dd) + log_kappa(d) + log_c_d(d);
  ExtremalConstants out{};
  out.alpha1 = std::exp(log_alpha1);
  out.alpha1_prime = std::exp(log_alpha1_prime);
  out.theta = out.alpha1 / out.alpha1_prime;
  if (std::abs(out.theta - 1.0 / (2.0 * dd)) > 1e-12) {
    throw std::logic_error("extremal index ratio drifted from 1/(2d)");
  }
  return out;
}

double miles_mean_simplex_volume(Dim d) {
  const double dd = d;
  const double log_value = -log_factorial(d) + std::lgamma((dd * dd + 1) / 2) -
                           std::lgamma(dd * dd / 2) + std::lgamma(dd / 2) - std::lgamma(0.5) +
                           dd * (std::lgamma(dd / 2) - std::lgamma((dd + 1) / 2));
  return std::exp(log_value);
}

double wendel_probability(Dim d) { return std::ldexp(1.0, 1 - d.value()); }

double conditional_mean_ratio(Dim d) {
  const double dd = d;
  return std::exp(std::log(dd) + std::lgamma(dd * dd / 2) + std::lgamma((dd + 1) / 2) -
                  std::lgamma((dd * dd + 1) / 2) - std::lgamma(dd / 2));
}

}  // namespace pvc
