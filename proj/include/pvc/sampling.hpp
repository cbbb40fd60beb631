#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "pvc/constants.hpp"
#include "pvc/vec.hpp"

namespace pvc {

/// Intensity |x|^alpha dx of the Poisson process; alpha = 0 is homogeneous.
class IntensityModel {
 public:
  enum class Kind { Homogeneous, RadialPower };

  static IntensityModel homogeneous() { return IntensityModel(Kind::Homogeneous, 0.0); }
  static IntensityModel radial_power(double alpha) { return IntensityModel(Kind::RadialPower, alpha); }
  /// Homogeneous for alpha == 0, RadialPower otherwise.
  static IntensityModel with_alpha(double alpha) {
    return alpha == 0.0 ? homogeneous() : radial_power(alpha);
  }

  Kind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  bool is_homogeneous() const noexcept { return alpha_ == 0.0; }

  /// Throws AlphaOutOfRange unless alpha > -d.
  void validate(Dim d) const { check_alpha(d, alpha_); }
  /// Density |x|^alpha.
  double density(const Vec& x) const;
  /// m_alpha(B_R(0)) = d kappa_d R^{d+alpha} / (d+alpha).
  double ball_measure(Dim d, double radius) const;
  /// Radius R with m_alpha(B_R(0)) = mass.
  double radius_for_measure(Dim d, double mass) const;

  friend bool operator==(const IntensityModel&, const IntensityModel&) = default;

 private:
  IntensityModel(Kind k, double a) : kind_(k), alpha_(a) {}
  Kind kind_;
  double alpha_;
};

/// Reproducible random stream keyed by (master_seed, replicate_index).
///
/// The key is hashed with SplitMix64 into the state of a xoshiro256++
/// generator, so every replicate owns an independent sequence that does not
/// depend on scheduling. Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t replicate_index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }
  double normal() { return normal_(*this); }
  std::int64_t poisson(double mean);

  std::uint64_t master_seed() const noexcept { return seed_; }
  std::uint64_t replicate_index() const noexcept { return index_; }

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::uint64_t s_[4];
  std::normal_distribution<double> normal_;
};

RngStream rng_stream(std::uint64_t master_seed, std::uint64_t replicate_index);

/// Uniform point on the unit sphere of R^d (normalized Gaussian).
Vec uniform_sphere(Dim d, RngStream& rng);

/// Poisson process with intensity model restricted to r_in <= |x| < r_out.
std::vector<Vec> poisson_annulus(Dim d, const IntensityModel& model, double r_in, double r_out,
                                 RngStream& rng);

/// Homogeneous unit-intensity Poisson process in the box [lo, hi].
std::vector<Vec> poisson_box(Dim d, const Vec& lo, const Vec& hi, RngStream& rng);

}  // namespace pvc
