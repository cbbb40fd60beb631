#include "pvc/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>

#include "pvc/error.hpp"
#include "pvc/geometry.hpp"
#include "pvc/sampling.hpp"
#include "pvc/typical_cell.hpp"

namespace pvc {

namespace {

// Per-block accumulators for `width` statistics, merged in block order.
struct BlockResult {
  std::vector<RunningStats> stats;
  std::int64_t degenerate = 0;
  std::int64_t retries = 0;
};

struct Aggregate {
  std::vector<RunningStats> stats;
  std::int64_t degenerate = 0;
  std::int64_t retries = 0;
};

// sample(rng, out, retries) fills `out` and returns false for a degenerate replicate.
template <class Sample>
Aggregate run_replicates(std::int64_t reps, std::uint64_t seed, int workers, std::size_t width, Sample sample) {
  if (reps < 1) throw Error(ErrorCode::ConfigError, "reps must be >= 1");
  std::vector<BlockResult> blocks(static_cast<std::size_t>(block_count(reps)));
  for_each_block(reps, workers, [&](std::int64_t b, std::int64_t first, std::int64_t last) {
    BlockResult& br = blocks[static_cast<std::size_t>(b)];
    br.stats.assign(width, RunningStats{});
    std::vector<double> values(width);
    for (std::int64_t i = first; i < last; ++i) {
      RngStream rng(seed, static_cast<std::uint64_t>(i));
      if (!sample(rng, values, br.retries)) {
        ++br.degenerate;
        continue;
      }
      for (std::size_t k = 0; k < width; ++k) br.stats[k].add(values[k]);
    }
  });
  Aggregate agg;
  agg.stats.assign(width, RunningStats{});
  for (const auto& br : blocks) {
    for (std::size_t k = 0; k < width; ++k) agg.stats[k].merge(br.stats[k]);
    agg.degenerate += br.degenerate;
    agg.retries += br.retries;
  }
  if (static_cast<double>(agg.degenerate) > kMaxDegenerateFraction * static_cast<double>(reps)) {
    throw Error(ErrorCode::DegenerateRun, std::to_string(agg.degenerate) + " of " + std::to_string(reps) +
                                              " replicates were geometrically degenerate");
  }
  return agg;
}

struct SphereSimplex {
  std::array<Vec, kMaxDim + 1> u;
  double volume = 0;
  HullTest pointy;
};

SphereSimplex draw_sphere_simplex(Dim d, RngStream& rng) {
  SphereSimplex s;
  for (int i = 0; i <= d; ++i) s.u[i] = uniform_sphere(d, rng);
  s.volume = simplex_volume(std::span<const Vec>(s.u.data(), d + 1));
  std::array<Vec, kMaxDim> proj;
  for (int i = 1; i <= d; ++i) proj[i - 1] = s.u[i] - s.u[0] * dot(s.u[i], s.u[0]);
  s.pointy = origin_in_hull(std::span<const Vec>(proj.data(), d));
  return s;
}

TypicalCell draw_cell(Dim d, const IntensityModel& model, RngStream& rng, std::int64_t& retries) {
  for (;;) {
    try {
      return build_typical_cell(d, model, rng);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RadiusCapExceeded) throw;
      ++retries;
    }
  }
}

MCEstimate single(const Aggregate& a, std::uint64_t seed) { return a.stats[0].estimate(seed, a.degenerate); }

}  // namespace

MCEstimate estimate_c_d(Dim d, std::int64_t reps, std::uint64_t seed, int workers) {
  return estimate_c_d_alpha(d, 0.0, reps, seed, workers);
}

MCEstimate estimate_c_d_alpha(Dim d, double alpha, std::int64_t reps, std::uint64_t seed, int workers) {
  check_alpha(d, alpha);
  auto agg = run_replicates(reps, seed, workers, 1, [&](RngStream& rng, std::vector<double>& out, std::int64_t&) {
    const SphereSimplex s = draw_sphere_simplex(d, rng);
    if (s.pointy.degenerate) return false;
    double w = s.pointy.inside ? s.volume : 0.0;
    if (alpha != 0.0 && w != 0.0) {
      for (int i = 1; i <= d; ++i) w *= std::pow(distance(s.u[i], s.u[0]), alpha);
    }
    out[0] = w;
    return true;
  });
  return single(agg, seed);
}

MCEstimate estimate_wendel(Dim d, std::int64_t reps, std::uint64_t seed, int workers) {
  auto agg = run_replicates(reps, seed, workers, 1, [&](RngStream& rng, std::vector<double>& out, std::int64_t&) {
    std::array<Vec, kMaxDim> proj;
    const Vec u0 = uniform_sphere(d, rng);
    for (int i = 0; i < d; ++i) {
      const Vec u = uniform_sphere(d, rng);
      proj[i] = u - u0 * dot(u, u0);
    }
    const HullTest h = origin_in_hull(std::span<const Vec>(proj.data(), d));
    if (h.degenerate) return false;
    out[0] = h.inside ? 1.0 : 0.0;
    return true;
  });
  return single(agg, seed);
}

MCEstimate estimate_miles(Dim d, std::int64_t reps, std::uint64_t seed, int workers) {
  auto agg = run_replicates(reps, seed, workers, 1, [&](RngStream& rng, std::vector<double>& out, std::int64_t&) {
    std::array<Vec, kMaxDim + 1> u;
    for (int i = 0; i <= d; ++i) u[i] = uniform_sphere(d, rng);
    out[0] = simplex_volume(std::span<const Vec>(u.data(), d + 1));
    return true;
  });
  return single(agg, seed);
}

MCEstimate estimate_pointy_count(Dim d, double alpha, double t, std::int64_t reps, std::uint64_t seed,
                                 int workers) {
  check_alpha(d, alpha);
  if (!(t >= 0)) throw Error(ErrorCode::NegativeThreshold, "threshold t must be >= 0");
  const auto model = IntensityModel::with_alpha(alpha);
  auto agg = run_replicates(reps, seed, workers, 1,
                            [&](RngStream& rng, std::vector<double>& out, std::int64_t& retries) {
                              const TypicalCell cell = draw_cell(d, model, rng, retries);
                              if (cell.degenerate()) return false;
                              out[0] = static_cast<double>(count_pointy_at_least(cell, t));
                              return true;
                            });
  return single(agg, seed);
}

TailReport estimate_tail(Dim d, double alpha, const std::vector<double>& t_grid, std::int64_t reps,
                         std::uint64_t seed, int workers) {
  check_alpha(d, alpha);
  if (t_grid.empty()) throw Error(ErrorCode::ConfigError, "t grid is empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0)) throw Error(ErrorCode::NegativeThreshold, "threshold t must be >= 0");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw Error(ErrorCode::ConfigError, "t grid must be ascending");
  }
  const auto model = IntensityModel::with_alpha(alpha);
  const std::size_t nt = t_grid.size();
  auto agg = run_replicates(reps, seed, workers, 3 * nt,
                            [&](RngStream& rng, std::vector<double>& out, std::int64_t& retries) {
                              const TypicalCell cell = draw_cell(d, model, rng, retries);
                              if (cell.degenerate()) return false;
                              for (std::size_t k = 0; k < nt; ++k) {
                                const auto count = count_pointy_at_least(cell, t_grid[k]);
                                out[k] = count >= 1 ? 1.0 : 0.0;
                                out[nt + k] = static_cast<double>(count);
                                out[2 * nt + k] = static_cast<double>(count * (count - 1) / 2);
                              }
                              return true;
                            });
  TailReport rep;
  rep.d = d;
  rep.alpha = alpha;
  rep.t_grid = t_grid;
  rep.reps = reps;
  rep.master_seed = seed;
  rep.degenerate_count = agg.degenerate;
  rep.radius_cap_retries = agg.retries;
  for (std::size_t k = 0; k < nt; ++k) {
    rep.empirical_prob.push_back(agg.stats[k].estimate(seed, agg.degenerate));
    rep.pointy_count.push_back(agg.stats[nt + k].estimate(seed, agg.degenerate));
    rep.pair_count.push_back(agg.stats[2 * nt + k].estimate(seed, agg.degenerate));
    rep.exact_expected_count.push_back(expected_pointy_count(d, alpha, t_grid[k]));
    rep.asymptotic.push_back(t_grid[k] > 0 ? tail_asymptotic(d, alpha, t_grid[k]) : 0.0);
  }
  return rep;
}

MCEstimate estimate_k_d_alpha_mc(Dim d, double alpha, std::int64_t reps, std::uint64_t seed, int workers) {
  check_alpha(d, alpha);
  const double kappa = unit_ball_volume(d);
  if (alpha > -0.5 * d) {
    // Uniform in B_1(-e_1) weighted by |x|^alpha; finite variance for alpha > -d/2.
    auto agg = run_replicates(reps, seed, workers, 1, [&](RngStream& rng, std::vector<double>& out, std::int64_t&) {
      Vec x = uniform_sphere(d, rng) * std::pow(rng.uniform(), 1.0 / d);
      x[0] -= 1.0;
      out[0] = kappa * std::pow(norm(x), alpha);
      return true;
    });
    return single(agg, seed);
  }
  // Heavier singularity at the origin: hit-or-miss under m_alpha on B_2(0).
  const auto model = IntensityModel::radial_power(alpha);
  const double mass = model.ball_measure(d, 2.0);
  const double p = d + alpha;
  const double top = std::pow(2.0, p);
  auto agg = run_replicates(reps, seed, workers, 1, [&](RngStream& rng, std::vector<double>& out, std::int64_t&) {
    Vec x = uniform_sphere(d, rng) * std::pow(rng.uniform() * top, 1.0 / p);
    x[0] += 1.0;
    out[0] = norm2(x) <= 1.0 ? mass : 0.0;
    return true;
  });
  return single(agg, seed);
}

}  // namespace pvc
