#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pvc/constants.hpp"
#include "pvc/error.hpp"
#include "pvc/estimators.hpp"

using namespace pvc;
using std::numbers::pi;

namespace {

bool within(const MCEstimate& e, double target, double k = 3) {
  return std::abs(e.mean - target) <= k * e.std_error;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::ConfigError;
}

// Straddles a block boundary so the merge order matters.
constexpr std::int64_t kOddReps = 2 * kBlockSize + 37;

}  // namespace

TEST_CASE("sphere-point estimators hit their closed forms") {
  for (int d = 2; d <= 4; ++d) {
    const MCEstimate c = estimate_c_d(Dim(d), 400'000, 1);
    INFO("d=" << d << " mean=" << c.mean << " se=" << c.std_error);
    CHECK(within(c, c_d(Dim(d))));
    CHECK(c.reps == 400'000);
    CHECK(c.master_seed == 1);
    CHECK(within(estimate_wendel(Dim(d), 200'000, 2), wendel_probability(Dim(d))));
    CHECK(within(estimate_miles(Dim(d), 200'000, 3), miles_mean_simplex_volume(Dim(d))));
  }
  CHECK(within(estimate_c_d_alpha(Dim(2), -1, 400'000, 4), 2 / (pi * pi)));
  CHECK(within(estimate_c_d_alpha(Dim(2), 1, 400'000, 5), c_d_alpha(Dim(2), 1)));
  CHECK(within(estimate_c_d_alpha(Dim(3), 1, 400'000, 6), c_d_alpha(Dim(3), 1)));
}

TEST_CASE("adjacent-ball measure by Monte Carlo") {
  CHECK(within(estimate_k_d_alpha_mc(Dim(2), 1, 400'000, 7), 32.0 / 9));
  CHECK(within(estimate_k_d_alpha_mc(Dim(2), -1, 400'000, 8), 4.0));
  CHECK(within(estimate_k_d_alpha_mc(Dim(3), 1, 400'000, 9), 8 * pi / 5));
}

TEST_CASE("pointy counts and the tail report") {
  CHECK(within(estimate_pointy_count(Dim(2), 0, 0, 20'000, 10), 4.0));
  CHECK(within(estimate_pointy_count(Dim(3), 0, 0, 1000, 11), 9 * pi * pi / 8));

  const TailReport r = estimate_tail(Dim(2), 0, {0.0, 0.5, 1.0}, 20'000, 12);
  REQUIRE(r.t_grid.size() == 3);
  REQUIRE(r.empirical_prob.size() == 3);
  REQUIRE(r.pair_count.size() == 3);
  CHECK(r.empirical_prob[0].mean == doctest::Approx(1.0));
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(within(r.pointy_count[k], r.exact_expected_count[k]));
    CHECK(r.exact_expected_count[k] == doctest::Approx(expected_pointy_count(Dim(2), 0, r.t_grid[k])));
    // P(D >= t) <= E#V(t), and E#V(t) - P(D >= t) <= E#pairs(t).
    CHECK(r.empirical_prob[k].mean <= r.pointy_count[k].mean);
    CHECK(r.pointy_count[k].mean - r.empirical_prob[k].mean <= r.pair_count[k].mean + 1e-12);
  }
  for (std::size_t k = 1; k < 3; ++k) {
    CHECK(r.empirical_prob[k].mean <= r.empirical_prob[k - 1].mean);
    CHECK(r.pair_count[k].mean <= r.pair_count[k - 1].mean);
  }
}

TEST_CASE("input validation") {
  CHECK(code_of([] { estimate_c_d(Dim(2), 0, 1); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { estimate_pointy_count(Dim(2), 0, -1, 10, 1); }) == ErrorCode::NegativeThreshold);
  CHECK(code_of([] { estimate_tail(Dim(2), 0, {}, 10, 1); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { estimate_tail(Dim(2), 0, {1.0, 0.5}, 10, 1); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { estimate_c_d_alpha(Dim(2), -2.5, 10, 1); }) == ErrorCode::AlphaOutOfRange);
}

TEST_CASE("results do not depend on the worker count") {
  const MCEstimate c1 = estimate_c_d(Dim(3), kOddReps, 13, 1);
  const MCEstimate w1 = estimate_wendel(Dim(3), kOddReps, 14, 1);
  const MCEstimate p1 = estimate_pointy_count(Dim(2), 1, 0.5, kOddReps, 15, 1);
  const TailReport t1 = estimate_tail(Dim(2), 0, {0.5, 1.0}, kOddReps, 16, 1);
  for (int workers : {2, 8}) {
    CHECK(estimate_c_d(Dim(3), kOddReps, 13, workers) == c1);
    CHECK(estimate_wendel(Dim(3), kOddReps, 14, workers) == w1);
    CHECK(estimate_pointy_count(Dim(2), 1, 0.5, kOddReps, 15, workers) == p1);
    const TailReport t = estimate_tail(Dim(2), 0, {0.5, 1.0}, kOddReps, 16, workers);
    CHECK(t.empirical_prob == t1.empirical_prob);
    CHECK(t.pointy_count == t1.pointy_count);
    CHECK(t.pair_count == t1.pair_count);
  }
  CHECK_FALSE(estimate_c_d(Dim(3), kOddReps, 99, 1) == c1);
}
