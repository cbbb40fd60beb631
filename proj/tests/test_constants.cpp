#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pvc/constants.hpp"
#include "pvc/error.hpp"

using namespace pvc;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::ConfigError;
}

}  // namespace

TEST_CASE("dimension and alpha validation") {
  CHECK(code_of([] { Dim d(1); }) == ErrorCode::InvalidDimension);
  CHECK(code_of([] { Dim d(13); }) == ErrorCode::InvalidDimension);
  CHECK_NOTHROW(check_alpha(Dim(2), -1.999));
  CHECK(code_of([] { check_alpha(Dim(2), -2.0); }) == ErrorCode::AlphaOutOfRange);
  CHECK(code_of([] { check_alpha(Dim(3), -3.5); }) == ErrorCode::AlphaOutOfRange);
}

TEST_CASE("unit ball volumes") {
  CHECK(rel(unit_ball_volume(Dim(2)), pi) < 1e-15);
  CHECK(rel(unit_ball_volume(Dim(3)), 4 * pi / 3) < 1e-15);
  CHECK(rel(unit_ball_volume(Dim(4)), pi * pi / 2) < 1e-15);
  CHECK(unit_ball_volume_any(0) == doctest::Approx(1.0));
  CHECK(unit_ball_volume_any(1) == doctest::Approx(2.0));
  CHECK(rel(unit_sphere_area(Dim(3)), 4 * pi) < 1e-15);
}

TEST_CASE("conditioned simplex constant against independent high-precision values") {
  CHECK(rel(c_d(Dim(2)), 1 / pi) < 1e-13);
  CHECK(rel(c_d(Dim(3)), pi / 64) < 1e-13);
  CHECK(rel(c_d(Dim(4)), 0.0050035152415969269848829364548) < 1e-12);
  CHECK(rel(c_d(Dim(5)), 0.000381201723331564926207348714347) < 1e-12);
}

TEST_CASE("recursion between consecutive dimensions") {
  for (int d = 3; d <= 10; ++d) {
    const double ratio = std::beta(d / 2.0, 0.5) / std::beta((d - 1) / 2.0, 0.5);
    const double rec = c_d(Dim(d - 1)) * std::pow(ratio, d - 1) / (2.0 * (d - 1));
    CHECK(rel(rec, c_d(Dim(d))) < 1e-10);
  }
}

TEST_CASE("adjacent-ball measure") {
  CHECK(rel(k_d_alpha(Dim(2), -1), 4.0) < 1e-12);
  CHECK(rel(k_d_alpha(Dim(2), 1), 32.0 / 9) < 1e-12);
  // Quadrature values of the defining integral.
  CHECK(rel(k_d_alpha(Dim(2), 0.5), 3.25329824560887969256895663417) < 1e-10);
  CHECK(rel(k_d_alpha(Dim(3), 1), 8 * pi / 5) < 1e-10);
  CHECK(rel(k_d_alpha(Dim(3), -1), 4.18879020478639098461685784437) < 1e-10);
  for (int d = kMinDim; d <= kMaxDim; ++d) CHECK(rel(k_d_alpha(Dim(d), 0), unit_ball_volume(Dim(d))) < 1e-12);
}

TEST_CASE("radial-power simplex constant") {
  CHECK(rel(c_d_alpha(Dim(2), -1), 2 / (pi * pi)) < 1e-10);
  CHECK(rel(c_d_alpha(Dim(2), 1), 0.7205062) < 1e-6);
  CHECK(rel(c_d_alpha(Dim(3), 1), 0.1448664) < 1e-6);
  for (int d = kMinDim; d <= kMaxDim; ++d) CHECK(rel(c_d_alpha(Dim(d), 0), c_d(Dim(d))) < 1e-12);
}

TEST_CASE("incomplete gamma for integer order") {
  CHECK(upper_incomplete_gamma_int(1, 0.0) == doctest::Approx(1.0));
  CHECK(upper_incomplete_gamma_int(2, 1.0) == doctest::Approx(2 * std::exp(-1.0)));
  CHECK(upper_incomplete_gamma_int(3, 0.0) == doctest::Approx(2.0));
  CHECK(rel(upper_incomplete_gamma_int(3, 2.5), std::exp(-2.5) * (2 + 2 * 2.5 + 2.5 * 2.5)) < 1e-14);
}

TEST_CASE("exact pointy-vertex expectation") {
  CHECK(rel(expected_pointy_count(Dim(2), 0, 0), 4.0) < 1e-12);
  CHECK(rel(expected_pointy_count(Dim(3), 0, 0), 9 * pi * pi / 8) < 1e-12);
  CHECK(rel(expected_pointy_count(Dim(2), 0, 0.5), 3.25612438374512325262685338398) < 1e-12);
  CHECK(rel(expected_pointy_count(Dim(2), 0, 1), 0.715897785656275770121838457051) < 1e-12);
  CHECK(rel(expected_pointy_count(Dim(2), 0, 1.5), 0.0274796053558928044048404982615) < 1e-12);
  CHECK(rel(expected_pointy_count(Dim(3), 0, 1), 2.35084683461468406860624416902) < 1e-12);
  CHECK(code_of([] { expected_pointy_count(Dim(2), 0, -0.1); }) == ErrorCode::NegativeThreshold);

  SUBCASE("strictly decreasing for t >= 1") {
    for (int d = 2; d <= 4; ++d)
      for (double a : {-1.0, 0.0, 1.0}) {
        double prev = expected_pointy_count(Dim(d), a, 1.0);
        for (double t = 1.05; t <= 3.0; t += 0.05) {
          const double v = expected_pointy_count(Dim(d), a, t);
          if (prev == 0) break;  // underflow
          CHECK(v < prev);
          prev = v;
        }
      }
  }
}

TEST_CASE("tail asymptotic and its prefactor") {
  for (int d : {2, 3})
    for (double a : {-1.0, -0.5, 0.0, 1.0, 2.0}) {
      const Dim dd(d);
      const double kd = unit_ball_volume(dd);
      const double lead = std::pow(d * kd, d + 1) * c_d_alpha(dd, a) / (k_d_alpha(dd, a) * (d + a));
      CHECK(rel(tail_prefactor(dd, a), lead) < 1e-12);
      CHECK(rel(tail_prefactor_explicit(dd, a), lead) < 1e-9);
    }
  // Ratio to the exact expectation tends to 1.
  const double r1 = tail_asymptotic(Dim(2), 0, 3) / expected_pointy_count(Dim(2), 0, 3);
  const double r2 = tail_asymptotic(Dim(2), 0, 6) / expected_pointy_count(Dim(2), 0, 6);
  CHECK(std::abs(1 - r2) < std::abs(1 - r1));
  CHECK(std::abs(1 - r2) < 0.01);
}

TEST_CASE("extremal constants") {
  const ExtremalConstants k2 = extremal_norm_constants(Dim(2));
  CHECK(k2.alpha1 == doctest::Approx(1.0));
  CHECK(k2.alpha1_prime == doctest::Approx(4.0));
  for (int d = kMinDim; d <= kMaxDim; ++d) {
    const ExtremalConstants k = extremal_norm_constants(Dim(d));
    CHECK(std::abs(k.theta - 1.0 / (2 * d)) < 1e-12);
    CHECK(std::abs(k.alpha1 / k.alpha1_prime - 1.0 / (2 * d)) < 1e-12);
  }
}

TEST_CASE("Wendel, Miles and the conditional-mean ratio") {
  for (int d = 2; d <= 6; ++d) CHECK(wendel_probability(Dim(d)) == std::ldexp(1.0, 1 - d));
  CHECK(rel(miles_mean_simplex_volume(Dim(2)), 3 / (2 * pi)) < 1e-13);
  CHECK(rel(miles_mean_simplex_volume(Dim(3)), 4 * pi / 105) < 1e-13);
  for (int d = kMinDim; d <= kMaxDim; ++d) {
    CHECK(conditional_mean_ratio(Dim(d)) >= 1.0);
    // C_d = Wendel * Miles * ratio.
    const double prod = wendel_probability(Dim(d)) * miles_mean_simplex_volume(Dim(d)) * conditional_mean_ratio(Dim(d));
    CHECK(rel(prod, c_d(Dim(d))) < 1e-10);
  }
}
