#include "pvc/extremes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pvc/error.hpp"
#include "pvc/sampling.hpp"
#include "pvc/typical_cell.hpp"

namespace pvc {

namespace {

constexpr int kMaxAttemptsPerReplicate = 100;
constexpr std::int64_t kReplicateChunk = 16;

// Inverse of the decreasing map t -> rho * E#V(t) by bisection.
double solve_level(Dim d, double rho, double target) {
  if (!(rho > 0) || !(target > 0)) throw Error(ErrorCode::BadRho, "level needs rho > 0 and target > 0");
  auto f = [&](double t) { return rho * expected_pointy_count(d, 0.0, t); };
  if (f(0.0) <= target) return 0.0;
  double lo = 0, hi = 1;
  while (f(hi) > target) {
    lo = hi;
    hi *= 2;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct ReplicateResult {
  double maximum = 0;
  std::int64_t nuclei = 0;
  std::int64_t rejected = 0;
  std::vector<double> tail;
};

}  // namespace

double ExtremeRunConfig::rho() const { return std::pow(n, static_cast<int>(d)); }

void ExtremeRunConfig::validate() const {
  if (!(n > 0)) throw Error(ErrorCode::BadBox, "box side n must be > 0");
  if (!(buffer >= 0)) throw Error(ErrorCode::BadBox, "buffer must be >= 0 (0 selects the default)");
  if (reps < 1) throw Error(ErrorCode::ConfigError, "reps must be >= 1");
  if (!(expected_exceedances >= kMinExpectedExceedances && expected_exceedances <= kMaxExpectedExceedances)) {
    throw Error(ErrorCode::ThresholdOutOfRange, "expected exceedances must lie in [0.2, 5]");
  }
}

double calibrate_buffer(Dim d, double rho) { return 2.0 * solve_level(d, rho, kBufferExceedance); }

double threshold_for_exceedances(Dim d, double rho, double expected) { return solve_level(d, rho, expected); }

NeighborGrid::NeighborGrid(std::span<const Vec> points, const Vec& lo, const Vec& hi, double cell)
    : points_(points), d_(lo.dim()), lo_(lo), cell_(cell) {
  std::int64_t total = 1;
  for (int i = 0; i < d_; ++i) {
    shape_[i] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((hi[i] - lo[i]) / cell)));
    total *= shape_[i];
  }
  std::vector<std::int64_t> key(points.size());
  start_.assign(static_cast<std::size_t>(total) + 1, 0);
  for (std::size_t k = 0; k < points.size(); ++k) {
    std::int64_t flat = 0;
    for (int i = 0; i < d_; ++i) {
      auto c = static_cast<std::int64_t>(std::floor((points[k][i] - lo[i]) / cell));
      c = std::clamp<std::int64_t>(c, 0, shape_[i] - 1);
      flat = flat * shape_[i] + c;
    }
    key[k] = flat;
    ++start_[flat + 1];
  }
  for (std::int64_t c = 0; c < total; ++c) start_[c + 1] += start_[c];
  members_.resize(points.size());
  std::vector<std::int64_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t k = 0; k < points.size(); ++k) members_[fill[key[k]]++] = static_cast<std::int64_t>(k);
}

void NeighborGrid::gather(const Vec& x, double radius, std::int64_t skip, std::vector<Vec>& out) const {
  out.clear();
  std::array<std::int64_t, kMaxDim> first{}, last{}, at{};
  for (int i = 0; i < d_; ++i) {
    first[i] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((x[i] - radius - lo_[i]) / cell_)), 0,
                                        shape_[i] - 1);
    last[i] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((x[i] + radius - lo_[i]) / cell_)), 0,
                                       shape_[i] - 1);
    at[i] = first[i];
  }
  const double r2 = radius * radius;
  for (;;) {
    std::int64_t flat = 0;
    for (int i = 0; i < d_; ++i) flat = flat * shape_[i] + at[i];
    for (std::int64_t m = start_[flat]; m < start_[flat + 1]; ++m) {
      const std::int64_t k = members_[m];
      if (k == skip) continue;
      Vec y = points_[k] - x;
      if (norm2(y) <= r2) out.push_back(y);
    }
    int i = d_ - 1;
    while (i >= 0 && at[i] == last[i]) {
      at[i] = first[i];
      --i;
    }
    if (i < 0) break;
    ++at[i];
  }
}

std::optional<double> nucleus_max_vertex_distance(const NeighborGrid& grid, std::span<const Vec> points,
                                                  std::int64_t index, double start_radius,
                                                  double available_radius) {
  const Vec& x = points[index];
  const int d = x.dim();
  thread_local std::vector<Vec> local;
  double radius = std::min(start_radius, available_radius);
  for (;;) {
    grid.gather(x, radius, index, local);
    const CertifiedCell cell = certify_cell(local, radius, d);
    if (cell.enumeration.degenerate()) return std::nullopt;
    if (cell.certified) return cell.max_vertex_distance;
    if (radius >= available_radius) return std::nullopt;
    radius = std::min(available_radius, 2 * radius);
  }
}

ExtremeReport run_box_experiment(const ExtremeRunConfig& cfg, int workers) {
  cfg.validate();
  const Dim d = cfg.d;
  const double rho = cfg.rho();
  const double buffer = cfg.buffer > 0 ? cfg.buffer : calibrate_buffer(d, rho);
  const double start_radius = 2.0 * solve_level(d, 1.0, 1e-2);
  const double pool_floor = solve_level(d, rho, kPoolExpectedExceedances);

  Vec lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = -buffer;
    hi[i] = cfg.n + buffer;
  }

  std::vector<ReplicateResult> results(static_cast<std::size_t>(cfg.reps));
  for_each_chunk(cfg.reps, kReplicateChunk, workers, [&](std::int64_t, std::int64_t first, std::int64_t last) {
    for (std::int64_t r = first; r < last; ++r) {
      RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
      ReplicateResult& res = results[static_cast<std::size_t>(r)];
      for (int attempt = 0;; ++attempt) {
        if (attempt >= kMaxAttemptsPerReplicate) {
          throw Error(ErrorCode::BufferTooSmall, "replicate could not be certified within the buffer");
        }
        const std::vector<Vec> pts = poisson_box(d, lo, hi, rng);
        const NeighborGrid grid(pts, lo, hi, 1.0);
        res.maximum = 0;
        res.nuclei = 0;
        res.tail.clear();
        bool ok = true;
        for (std::size_t k = 0; k < pts.size() && ok; ++k) {
          const Vec& x = pts[k];
          double available = std::numeric_limits<double>::infinity();
          bool inside = true;
          for (int i = 0; i < d; ++i) {
            if (x[i] < 0 || x[i] > cfg.n) inside = false;
            available = std::min({available, x[i] - lo[i], hi[i] - x[i]});
          }
          if (!inside) continue;
          ++res.nuclei;
          const auto dx = nucleus_max_vertex_distance(grid, pts, static_cast<std::int64_t>(k), start_radius, available);
          if (!dx) {
            ok = false;
            break;
          }
          res.maximum = std::max(res.maximum, *dx);
          if (*dx >= pool_floor) res.tail.push_back(*dx);
        }
        if (ok) break;
        ++res.rejected;
      }
    }
  });

  ExtremeReport rep;
  rep.d = d;
  rep.n = cfg.n;
  rep.rho = rho;
  rep.buffer = buffer;
  rep.master_seed = cfg.seed;
  rep.pool_floor = pool_floor;
  for (auto& r : results) {
    rep.maxima.push_back(r.maximum);
    rep.nuclei_in_box.push_back(r.nuclei);
    rep.rejected_replicates += r.rejected;
    rep.total_nuclei += r.nuclei;
    rep.pooled_tail.insert(rep.pooled_tail.end(), r.tail.begin(), r.tail.end());
  }
  if (static_cast<double>(rep.rejected_replicates) > kMaxRejectedFraction * static_cast<double>(cfg.reps)) {
    throw Error(ErrorCode::BufferTooSmall, "more than 1% of replicates failed certification");
  }
  if (rho > std::exp(1.0)) {
    rep.normalized = gumbel_normalize(rep.maxima, d, rho, NormConst::Alpha1);
    rep.ks_gumbel = ks_distance(rep.normalized, gumbel_cdf);
    rep.threshold = threshold_for_exceedances(d, rho, cfg.expected_exceedances);
    const auto below = std::count_if(rep.maxima.begin(), rep.maxima.end(),
                                     [&](double m) { return m <= rep.threshold; });
    if (below > 0 && below < cfg.reps) rep.theta_hat = estimate_extremal_index(rep, rep.threshold, d);
  }
  return rep;
}

std::vector<double> gumbel_normalize(std::span<const double> maxima, Dim d, double rho, NormConst which) {
  if (!(rho > std::exp(1.0))) throw Error(ErrorCode::BadRho, "rho must exceed e");
  const ExtremalConstants k = extremal_norm_constants(d);
  const double c = which == NormConst::Alpha1 ? k.alpha1 : k.alpha1_prime;
  const double shift = std::log(c * rho * std::pow(std::log(rho), static_cast<int>(d) - 1));
  const double kd = unit_ball_volume(d);
  std::vector<double> out;
  out.reserve(maxima.size());
  for (double m : maxima) out.push_back(kd * std::pow(m, static_cast<int>(d)) - shift);
  return out;
}

double gumbel_cdf(double t) { return std::exp(-std::exp(-t)); }

MCEstimate extremal_index_from_proportion(double p_le, std::int64_t reps, double expected) {
  if (!(p_le > 0 && p_le < 1)) throw Error(ErrorCode::ThresholdOutOfRange, "P(M <= u) must lie in (0, 1)");
  if (!(expected > 0) || reps < 1) throw Error(ErrorCode::ThresholdOutOfRange, "need expected > 0 and reps >= 1");
  MCEstimate e;
  e.mean = -std::log(p_le) / expected;
  e.std_error = std::sqrt((1 - p_le) / (p_le * static_cast<double>(reps))) / expected;
  e.reps = reps;
  return e;
}

namespace {

double checked_expected(const ExtremeReport& report, double u, Dim d) {
  if (!(u >= 0)) throw Error(ErrorCode::ThresholdOutOfRange, "threshold must be >= 0");
  const double expected = report.rho * expected_pointy_count(d, 0.0, u);
  if (!(expected >= kMinExpectedExceedances && expected <= kMaxExpectedExceedances)) {
    throw Error(ErrorCode::ThresholdOutOfRange, "rho * E#V(u) must lie in [0.2, 5]");
  }
  return expected;
}

}  // namespace

MCEstimate estimate_extremal_index(const ExtremeReport& report, double u, Dim d) {
  const double expected = checked_expected(report, u, d);
  const auto reps = static_cast<std::int64_t>(report.maxima.size());
  if (reps == 0) throw Error(ErrorCode::EmptySample, "report has no maxima");
  const auto below = std::count_if(report.maxima.begin(), report.maxima.end(), [u](double m) { return m <= u; });
  MCEstimate e = extremal_index_from_proportion(static_cast<double>(below) / static_cast<double>(reps), reps, expected);
  e.master_seed = report.master_seed;
  return e;
}

MCEstimate iid_control_extremal_index(const ExtremeReport& report, double u, Dim d, std::uint64_t seed) {
  const double expected = checked_expected(report, u, d);
  if (u < report.pool_floor) throw Error(ErrorCode::ThresholdOutOfRange, "threshold below the pooled range");
  if (report.total_nuclei == 0) throw Error(ErrorCode::EmptySample, "report has no nuclei");
  const auto over = std::count_if(report.pooled_tail.begin(), report.pooled_tail.end(), [u](double v) { return v > u; });
  const double p = static_cast<double>(over) / static_cast<double>(report.total_nuclei);
  std::int64_t below = 0;
  for (std::size_t r = 0; r < report.nuclei_in_box.size(); ++r) {
    RngStream rng(seed, r);
    std::binomial_distribution<std::int64_t> exceed(report.nuclei_in_box[r], p);
    if (exceed(rng) == 0) ++below;
  }
  const auto reps = static_cast<std::int64_t>(report.nuclei_in_box.size());
  MCEstimate e = extremal_index_from_proportion(static_cast<double>(below) / static_cast<double>(reps), reps, expected);
  e.master_seed = seed;
  return e;
}

}  // namespace pvc
