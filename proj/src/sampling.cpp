#include "pvc/sampling.hpp"

#include <cmath>

#include "pvc/error.hpp"

namespace pvc {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) noexcept {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

}  // namespace

double IntensityModel::density(const Vec& x) const {
  return is_homogeneous() ? 1.0 : std::pow(norm(x), alpha_);
}

double IntensityModel::ball_measure(Dim d, double radius) const {
  validate(d);
  const double p = d + alpha_;
  return d * unit_ball_volume(d) * std::pow(radius, p) / p;
}

double IntensityModel::radius_for_measure(Dim d, double mass) const {
  validate(d);
  const double p = d + alpha_;
  return std::pow(mass * p / (d * unit_ball_volume(d)), 1.0 / p);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t replicate_index)
    : seed_(master_seed), index_(replicate_index) {
  std::uint64_t a = master_seed;
  std::uint64_t b = replicate_index ^ 0x6A09E667F3BCC909ULL;
  std::uint64_t key = splitmix64(a) ^ rotl(splitmix64(b), 29);
  for (auto& w : s_) w = splitmix64(key);
}

RngStream::result_type RngStream::operator()() noexcept {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::int64_t RngStream::poisson(double mean) {
  if (mean <= 0) return 0;
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(*this);
}

RngStream rng_stream(std::uint64_t master_seed, std::uint64_t replicate_index) {
  return RngStream(master_seed, replicate_index);
}

Vec uniform_sphere(Dim d, RngStream& rng) {
  Vec u(d);
  for (;;) {
    for (int i = 0; i < d; ++i) u[i] = rng.normal();
    const double n = norm(u);
    if (n > 1e-300) return u * (1.0 / n);
  }
}

std::vector<Vec> poisson_annulus(Dim d, const IntensityModel& model, double r_in, double r_out,
                                 RngStream& rng) {
  model.validate(d);
  if (!(r_in >= 0) || !(r_out > r_in)) {
    throw Error(ErrorCode::EmptyAnnulus, "annulus needs 0 <= r_in < r_out");
  }
  const double p = d + model.alpha();
  const double lo = std::pow(r_in, p);
  const double hi = std::pow(r_out, p);
  const double mean = d * unit_ball_volume(d) * (hi - lo) / p;
  const auto count = rng.poisson(mean);
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    const double radius = std::pow(lo + rng.uniform() * (hi - lo), 1.0 / p);
    pts.push_back(uniform_sphere(d, rng) * radius);
  }
  return pts;
}

std::vector<Vec> poisson_box(Dim d, const Vec& lo, const Vec& hi, RngStream& rng) {
  if (lo.dim() != d || hi.dim() != d) throw Error(ErrorCode::BadBox, "box corners have wrong dimension");
  double volume = 1;
  for (int i = 0; i < d; ++i) {
    if (!(lo[i] < hi[i])) throw Error(ErrorCode::BadBox, "box needs lo < hi componentwise");
    volume *= hi[i] - lo[i];
  }
  const auto count = rng.poisson(volume);
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = lo[i] + rng.uniform() * (hi[i] - lo[i]);
    pts.push_back(x);
  }
  return pts;
}

}  // namespace pvc
