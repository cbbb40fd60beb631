#include "pvc/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "pvc/error.hpp"

namespace pvc {

namespace {

void require_dims(std::span<const Vec> pts, int count, int dim, const char* what) {
  if (static_cast<int>(pts.size()) != count) throw Error(ErrorCode::DimensionMismatch, what);
  for (const auto& p : pts)
    if (p.dim() != dim) throw Error(ErrorCode::DimensionMismatch, what);
}

}  // namespace

double simplex_volume(std::span<const Vec> points) {
  if (points.empty()) throw Error(ErrorCode::DimensionMismatch, "simplex_volume needs points");
  const int d = points[0].dim();
  require_dims(points, d + 1, d, "simplex_volume needs d+1 points in R^d");
  SmallMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = points[i + 1][j] - points[0][j];
  return abs_determinant(m) / std::tgamma(d + 1.0);
}

std::optional<Vec> try_circumcenter_with_origin(std::span<const Vec> nuclei) {
  const int d = static_cast<int>(nuclei.size());
  SmallMatrix m(d, d);
  std::array<double, SmallMatrix::kCap> rhs{};
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = nuclei[i][j];
    rhs[i] = 0.5 * norm2(nuclei[i]);
  }
  return solve_linear(m, std::span<const double>(rhs.data(), d));
}

Vec circumcenter_with_origin(std::span<const Vec> nuclei) {
  if (nuclei.empty()) throw Error(ErrorCode::DimensionMismatch, "circumcenter needs d points");
  const int d = nuclei[0].dim();
  require_dims(nuclei, d, d, "circumcenter needs d points in R^d");
  auto c = try_circumcenter_with_origin(nuclei);
  if (!c) throw Error(ErrorCode::SingularConfiguration, "nuclei are affinely degenerate with the origin");
  return *c;
}

Vec project_onto_complement(const Vec& u0, const Vec& v) {
  if (u0.dim() != v.dim()) throw Error(ErrorCode::DimensionMismatch, "projection operands differ in dimension");
  if (std::abs(norm(u0) - 1.0) > 1e-12) throw Error(ErrorCode::NotUnit, "projection axis is not a unit vector");
  return v - u0 * dot(v, u0);
}

HullTest origin_in_hull(std::span<const Vec> points) {
  if (points.empty()) throw Error(ErrorCode::DimensionMismatch, "origin_in_hull needs d points");
  const int d = points[0].dim();
  require_dims(points, d, d, "origin_in_hull needs d points in R^d");

  SmallMatrix m(d + 1, d);
  std::array<double, SmallMatrix::kCap> rhs{};
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) m(i, j) = points[j][i];
    m(d, j) = 1.0;
  }
  rhs[d] = 1.0;
  const auto lambda = solve_linear(m, std::span<const double>(rhs.data(), d + 1));
  if (!lambda) return {false, true};
  bool inside = true;
  for (int i = 0; i < d; ++i) {
    const double l = (*lambda)[i];
    if (std::abs(l) <= kHullTolerance) return {false, true};
    if (l < 0) inside = false;
  }
  return {inside, false};
}

HullTest classify_pointy(const Vec& c, std::span<const Vec> nuclei) {
  const int d = c.dim();
  require_dims(nuclei, d, d, "pointy test needs d nuclei in R^d");
  const double cn = norm(c);
  if (cn < 1e-12) throw Error(ErrorCode::ZeroVertex, "vertex coincides with the nucleus");
  const Vec u0 = c * (1.0 / cn);
  std::array<Vec, kMaxDim> proj;
  for (int i = 0; i < d; ++i) {
    Vec u = nuclei[i] - c;
    u *= 1.0 / norm(u);
    proj[i] = u - u0 * dot(u, u0);
  }
  return origin_in_hull(std::span<const Vec>(proj.data(), d));
}

double union_ball_volume_lower_bound(const BallPairConfig& cfg, Dim d) {
  if (!(cfg.r > 0) || !(cfg.r_prime >= cfg.r) || !(cfg.delta >= 0)) {
    throw Error(ErrorCode::ConditionViolated, "ball pair needs 0 < r <= r' and delta >= 0");
  }
  if (cfg.delta * cfg.delta < cfg.r_prime * cfg.r_prime - cfg.r * cfg.r) {
    throw Error(ErrorCode::ConditionViolated, "bound requires delta^2 >= r'^2 - r^2");
  }
  const double kd = unit_ball_volume(d);
  const double kd1 = unit_ball_volume_any(d - 1);
  return 0.5 * kd * std::pow(cfg.r, d) + 0.5 * kd * std::pow(cfg.r_prime, d) +
         kd1 * std::pow(cfg.r, d - 1) * cfg.delta / (2.0 * d);
}

MCEstimate mc_union_ball_volume(const Vec& center1, double r, const Vec& center2, double r_prime,
                                const IntensityModel& model, std::int64_t n, std::uint64_t seed) {
  if (center1.dim() != center2.dim()) throw Error(ErrorCode::DimensionMismatch, "ball centers differ in dimension");
  const Dim d(center1.dim());
  model.validate(d);
  if (!(r > 0) || !(r_prime > 0) || n < 1) {
    throw Error(ErrorCode::ConditionViolated, "union volume needs positive radii and n >= 1");
  }
  RngStream rng(seed, 0);
  RunningStats acc;
  auto inside = [&](const Vec& x) {
    return norm2(x - center1) <= r * r || norm2(x - center2) <= r_prime * r_prime;
  };

  if (model.is_homogeneous()) {
    // Uniform proposal in the tight bounding box of the two balls.
    Vec lo(d), hi(d);
    double box = 1;
    for (int i = 0; i < d; ++i) {
      lo[i] = std::min(center1[i] - r, center2[i] - r_prime);
      hi[i] = std::max(center1[i] + r, center2[i] + r_prime);
      box *= hi[i] - lo[i];
    }
    Vec x(d);
    for (std::int64_t k = 0; k < n; ++k) {
      for (int i = 0; i < d; ++i) x[i] = lo[i] + rng.uniform() * (hi[i] - lo[i]);
      acc.add(inside(x) ? box : 0.0);
    }
  } else {
    // Proposal drawn from m_alpha itself on an origin-centred ball covering
    // both balls; hit-or-miss keeps the variance finite for negative alpha.
    const double reach = std::max(norm(center1) + r, norm(center2) + r_prime);
    const double mass = model.ball_measure(d, reach);
    const double p = d + model.alpha();
    const double top = std::pow(reach, p);
    for (std::int64_t k = 0; k < n; ++k) {
      const double radius = std::pow(rng.uniform() * top, 1.0 / p);
      const Vec x = uniform_sphere(d, rng) * radius;
      acc.add(inside(x) ? mass : 0.0);
    }
  }
  return acc.estimate(seed, 0);
}

}  // namespace pvc
