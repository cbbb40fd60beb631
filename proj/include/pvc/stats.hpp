#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace pvc {

/// Result of a Monte Carlo estimator.
struct MCEstimate {
  double mean = 0;
  double std_error = 0;
  std::int64_t reps = 0;  // accepted replicates
  std::uint64_t master_seed = 0;
  std::int64_t degenerate_count = 0;

  friend bool operator==(const MCEstimate&, const MCEstimate&) = default;
};

/// Single-pass mean/variance (Welford), mergeable (Chan et al.).
class RunningStats {
 public:
  void add(double x) noexcept {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  void merge(const RunningStats& o) noexcept;

  std::int64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const noexcept;

  MCEstimate estimate(std::uint64_t seed, std::int64_t degenerate) const;

 private:
  std::int64_t n_ = 0;
  double mean_ = 0;
  double m2_ = 0;
};

/// Replicates per block. Block boundaries do not depend on the worker count,
/// so merged results are bit-identical for any number of workers.
inline constexpr std::int64_t kBlockSize = 2048;

/// Number of workers to use when the caller passes workers <= 0.
int default_workers();

/// Calls body(block_index, first_rep, last_rep) for every block of
/// [0, reps) using up to `workers` threads. Blocks are claimed dynamically;
/// callers store per-block results by index and combine them in order.
void for_each_block(std::int64_t reps, int workers,
                    const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& body);

/// for_each_block with an arbitrary chunk length.
void for_each_chunk(std::int64_t reps, std::int64_t chunk, int workers,
                    const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& body);

/// Number of blocks for_each_block will produce.
inline std::int64_t block_count(std::int64_t reps) { return (reps + kBlockSize - 1) / kBlockSize; }

/// Kolmogorov-Smirnov sup distance between the empirical CDF of `sample`
/// and `cdf`. Throws EmptySample for an empty sample.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

}  // namespace pvc
