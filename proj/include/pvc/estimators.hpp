#pragma once

#include <cstdint>
#include <vector>

#include "pvc/constants.hpp"
#include "pvc/stats.hpp"

namespace pvc {

/// Largest tolerated fraction of degenerate replicates in a run.
inline constexpr double kMaxDegenerateFraction = 1e-3;

/// Tail comparison on a grid of thresholds, all evaluated on one shared
/// ensemble of typical cells.
struct TailReport {
  int d = 2;
  double alpha = 0;
  std::vector<double> t_grid;
  std::vector<MCEstimate> empirical_prob;     // P(D >= t)
  std::vector<MCEstimate> pointy_count;       // E #pointy vertices at distance >= t
  std::vector<MCEstimate> pair_count;         // E #unordered pairs of those
  std::vector<double> exact_expected_count;   // closed form for pointy_count
  std::vector<double> asymptotic;             // leading-order tail
  std::int64_t reps = 0;
  std::uint64_t master_seed = 0;
  std::int64_t degenerate_count = 0;
  std::int64_t radius_cap_retries = 0;
};

/// E[simplex volume * 1{pointy}] for d+1 uniform sphere points; equals C_d.
MCEstimate estimate_c_d(Dim d, std::int64_t reps, std::uint64_t seed, int workers = 0);

/// Same with the weight prod |U_i - U_0|^alpha; equals C_{d,alpha}.
MCEstimate estimate_c_d_alpha(Dim d, double alpha, std::int64_t reps, std::uint64_t seed, int workers = 0);

/// Probability of the pointy condition for uniform sphere points.
MCEstimate estimate_wendel(Dim d, std::int64_t reps, std::uint64_t seed, int workers = 0);

/// Unconditioned mean simplex volume for uniform sphere points.
MCEstimate estimate_miles(Dim d, std::int64_t reps, std::uint64_t seed, int workers = 0);

/// Mean number of pointy vertices at distance >= t over typical cells.
MCEstimate estimate_pointy_count(Dim d, double alpha, double t, std::int64_t reps, std::uint64_t seed,
                                 int workers = 0);

TailReport estimate_tail(Dim d, double alpha, const std::vector<double>& t_grid, std::int64_t reps,
                         std::uint64_t seed, int workers = 0);

/// m_alpha-measure of the unit ball adjacent to the origin, by Monte Carlo.
MCEstimate estimate_k_d_alpha_mc(Dim d, double alpha, std::int64_t reps, std::uint64_t seed, int workers = 0);

}  // namespace pvc
