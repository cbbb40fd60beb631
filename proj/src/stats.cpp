#include "pvc/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "pvc/error.hpp"

namespace pvc {

void RunningStats::merge(const RunningStats& o) noexcept {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const auto n = n_ + o.n_;
  const double delta = o.mean_ - mean_;
  const double fa = static_cast<double>(n_);
  const double fb = static_cast<double>(o.n_);
  mean_ += delta * fb / static_cast<double>(n);
  m2_ += o.m2_ + delta * delta * fa * fb / static_cast<double>(n);
  n_ = n;
}

double RunningStats::std_error() const noexcept {
  return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

MCEstimate RunningStats::estimate(std::uint64_t seed, std::int64_t degenerate) const {
  return MCEstimate{mean_, std_error(), n_, seed, degenerate};
}

int default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void for_each_block(std::int64_t reps, int workers,
                    const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& body) {
  for_each_chunk(reps, kBlockSize, workers, body);
}

void for_each_chunk(std::int64_t reps, std::int64_t chunk, int workers,
                    const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& body) {
  if (reps <= 0) return;
  const std::int64_t blocks = (reps + chunk - 1) / chunk;
  if (workers <= 0) workers = default_workers();
  const int threads = static_cast<int>(std::min<std::int64_t>(workers, blocks));
  auto run_block = [&](std::int64_t b) {
    const std::int64_t first = b * chunk;
    body(b, first, std::min(reps, first + chunk));
  };
  if (threads <= 1) {
    for (std::int64_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }

  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t b = next.fetch_add(1);
        if (b >= blocks) return;
        try {
          run_block(b);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(blocks);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw Error(ErrorCode::EmptySample, "ks_distance needs a nonempty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double worst = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    // Empirical CDF jumps at ties; compare with the value just before and at x.
    std::size_t j = i;
    while (j + 1 < sample.size() && sample[j + 1] == sample[i]) ++j;
    worst = std::max(worst, std::abs(f - static_cast<double>(i) / n));
    worst = std::max(worst, std::abs(static_cast<double>(j + 1) / n - f));
    i = j;
  }
  return worst;
}

}  // namespace pvc
