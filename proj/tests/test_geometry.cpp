#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pvc/error.hpp"
#include "pvc/geometry.hpp"
#include "pvc/validation.hpp"

using namespace pvc;
using std::numbers::pi;

namespace {

bool close(const Vec& a, const Vec& b, double tol = 1e-12) { return distance(a, b) <= tol; }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::ConfigError;
}

Vec random_gaussian(int d, RngStream& rng) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.normal();
  return v;
}

// Random rotation: Gram-Schmidt on Gaussian columns.
std::vector<Vec> random_rotation(int d, RngStream& rng) {
  std::vector<Vec> q;
  while (static_cast<int>(q.size()) < d) {
    Vec v = random_gaussian(d, rng);
    for (const auto& e : q) v -= e * dot(v, e);
    const double n = norm(v);
    if (n < 1e-6) continue;
    q.push_back(v * (1 / n));
  }
  return q;
}

Vec apply(const std::vector<Vec>& rows, const Vec& x) {
  Vec y(x.dim());
  for (int i = 0; i < x.dim(); ++i) y[i] = dot(rows[i], x);
  return y;
}

}  // namespace

TEST_CASE("simplex volume") {
  const std::vector<Vec> tri = {{0, 0}, {1, 0}, {0, 1}};
  CHECK(simplex_volume(tri) == doctest::Approx(0.5));
  const std::vector<Vec> tet = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  CHECK(simplex_volume(tet) == doctest::Approx(1.0 / 6));
  const std::vector<Vec> flat = {{0, 0}, {1, 0}, {2, 0}};
  CHECK(simplex_volume(flat) == doctest::Approx(0.0));
  const std::vector<Vec> wrong = {{0, 0}, {1, 0}};
  CHECK(code_of([&] { simplex_volume(wrong); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("circumcenter with the origin") {
  CHECK(close(circumcenter_with_origin(std::vector<Vec>{{2, 0}, {0, 2}}), Vec{1, 1}));
  CHECK(close(circumcenter_with_origin(std::vector<Vec>{{1, 1}, {1, -1}}), Vec{1, 0}));
  CHECK(close(circumcenter_with_origin(std::vector<Vec>{{2, 0, 0}, {0, 2, 0}, {0, 0, 2}}), Vec{1, 1, 1}));
  CHECK(code_of([] { circumcenter_with_origin(std::vector<Vec>{{1, 1}, {2, 2}}); }) ==
        ErrorCode::SingularConfiguration);
  CHECK(code_of([] { circumcenter_with_origin(std::vector<Vec>{{1, 1, 0}, {2, 2, 0}}); }) ==
        ErrorCode::DimensionMismatch);

  SUBCASE("equidistance on random configurations") {
    RngStream rng(11, 0);
    double worst = 0;
    for (int d = 2; d <= 4; ++d)
      for (int k = 0; k < 10'000; ++k) {
        std::vector<Vec> x;
        for (int i = 0; i < d; ++i) x.push_back(random_gaussian(d, rng));
        const auto c = try_circumcenter_with_origin(x);
        if (!c) continue;
        for (const auto& xi : x) worst = std::max(worst, std::abs(distance(*c, xi) - norm(*c)) / norm(*c));
      }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("projection onto the orthogonal complement") {
  CHECK(close(project_onto_complement(Vec{1, 0}, Vec{3, 4}), Vec{0, 4}));
  CHECK(close(project_onto_complement(Vec{0, 1}, Vec{0, 1}), Vec{0, 0}));
  CHECK(close(project_onto_complement(Vec{1, 0, 0}, Vec{1, 2, 3}), Vec{0, 2, 3}));
  CHECK(code_of([] { project_onto_complement(Vec{1, 1}, Vec{1, 0}); }) == ErrorCode::NotUnit);
}

TEST_CASE("origin in hull") {
  CHECK(origin_in_hull(std::vector<Vec>{{0, -0.5}, {0, 0.7}}).inside);
  CHECK_FALSE(origin_in_hull(std::vector<Vec>{{0, 0.2}, {0, 0.7}}).inside);
  const double s = std::sqrt(3.0) / 2;
  const HullTest tri = origin_in_hull(std::vector<Vec>{{1, 0, 0}, {-0.5, s, 0}, {-0.5, -s, 0}});
  CHECK(tri.inside);
  CHECK_FALSE(tri.degenerate);
  const HullTest edge = origin_in_hull(std::vector<Vec>{{0, 0}, {0, 1}});
  CHECK_FALSE(edge.inside);
  CHECK(edge.degenerate);

  SUBCASE("agrees with the orientation oracle outside the boundary band") {
    RngStream rng(12, 0);
    int disagreements = 0, compared = 0;
    for (int k = 0; k < 10'000; ++k) {
      const int d = 2 + k % 4;
      const Vec n = uniform_sphere(Dim(d), rng);
      std::vector<Vec> p;
      for (int i = 0; i < d; ++i) p.push_back(project_onto_complement(n, random_gaussian(d, rng)));
      const HullTest h = origin_in_hull(p);
      const auto oracle = origin_in_simplex_by_orientation(p, n);
      if (h.degenerate || !oracle) continue;
      ++compared;
      if (h.inside != *oracle) ++disagreements;
    }
    CHECK(disagreements == 0);
    CHECK(compared > 9'900);
  }
}

TEST_CASE("pointy classification") {
  CHECK(is_pointy(Vec{1, 1}, std::vector<Vec>{{2, 0}, {0, 2}}));
  CHECK_FALSE(is_pointy(Vec{1, 0}, std::vector<Vec>{{0.5, 0.866025}, {1.866025, 0.5}}));
  CHECK(is_pointy(Vec{1, 0}, std::vector<Vec>{{0.5, 0.866025}, {0.5, -0.866025}}));
  CHECK(code_of([] { classify_pointy(Vec{0, 0}, std::vector<Vec>{{1, 0}, {0, 1}}); }) == ErrorCode::ZeroVertex);

  SUBCASE("invariant under rotation and relabeling") {
    RngStream rng(13, 0);
    int checked = 0;
    for (int k = 0; k < 1000; ++k) {
      const int d = 2 + k % 3;
      std::vector<Vec> x;
      for (int i = 0; i < d; ++i) x.push_back(random_gaussian(d, rng));
      const auto c = try_circumcenter_with_origin(x);
      if (!c) continue;
      const HullTest base = classify_pointy(*c, x);
      if (base.degenerate) continue;
      const auto rot = random_rotation(d, rng);
      std::vector<Vec> xr;
      for (const auto& xi : x) xr.push_back(apply(rot, xi));
      CHECK(classify_pointy(apply(rot, *c), xr).inside == base.inside);
      std::reverse(x.begin(), x.end());
      CHECK(classify_pointy(*c, x).inside == base.inside);
      ++checked;
    }
    CHECK(checked > 900);
  }
}

TEST_CASE("union-of-balls lower bound") {
  CHECK(union_ball_volume_lower_bound({1, 1, 1}, Dim(2)) == doctest::Approx(pi + 0.5));
  CHECK(union_ball_volume_lower_bound({1, 1, 0}, Dim(2)) == doctest::Approx(pi));
  CHECK(union_ball_volume_lower_bound({1, 1, 1}, Dim(3)) == doctest::Approx(4 * pi / 3 + pi / 6));
  CHECK(code_of([] { union_ball_volume_lower_bound({1, 2, 1}, Dim(2)); }) == ErrorCode::ConditionViolated);
}

TEST_CASE("Monte Carlo union volume") {
  const auto hom = IntensityModel::homogeneous();
  auto within = [](const MCEstimate& e, double target) { return std::abs(e.mean - target) <= 3 * e.std_error; };
  CHECK(within(mc_union_ball_volume(Vec{0, 0}, 1, Vec{0, 0}, 1, hom, 1'000'000, 1), pi));
  CHECK(within(mc_union_ball_volume(Vec{0, 0}, 1, Vec{1, 0}, 1, hom, 1'000'000, 2),
               2 * pi - (2 * pi / 3 - std::sqrt(3.0) / 2)));
  CHECK(within(mc_union_ball_volume(Vec{0, 0}, 1, Vec{3, 0}, 1, hom, 1'000'000, 3), 2 * pi));
  // Radial-power measure of one ball adjacent to the origin.
  CHECK(within(mc_union_ball_volume(Vec{1, 0}, 1, Vec{1, 0}, 1, IntensityModel::radial_power(1), 400'000, 4),
               32.0 / 9));
  CHECK(mc_union_ball_volume(Vec{0, 0}, 1, Vec{1, 0}, 1, hom, 1000, 9) ==
        mc_union_ball_volume(Vec{0, 0}, 1, Vec{1, 0}, 1, hom, 1000, 9));

  SUBCASE("lower bound holds on random configurations") {
    RngStream rng(14, 0);
    int violations = 0, configs = 0;
    while (configs < 1000) {
      const int d = 2 + configs % 2;
      double r1 = 0.2 + rng.uniform(), r2 = 0.2 + rng.uniform();
      if (r1 > r2) std::swap(r1, r2);
      const Vec c1 = uniform_sphere(Dim(d), rng) * r1;
      const Vec c2 = uniform_sphere(Dim(d), rng) * r2;
      const double delta = distance(c1, c2);
      if (delta * delta < r2 * r2 - r1 * r1) continue;
      const double bound = union_ball_volume_lower_bound({r1, r2, delta}, Dim(d));
      const MCEstimate v = mc_union_ball_volume(c1, r1, c2, r2, hom, 20'000, 1000 + configs);
      if (v.mean < bound - 3 * v.std_error) ++violations;
      ++configs;
    }
    CHECK(violations == 0);
  }

  SUBCASE("radial-power union exceeds the single-ball measure") {
    RngStream rng(15, 0);
    for (double a : {-1.0, 1.0}) {
      const auto model = IntensityModel::radial_power(a);
      double gap_per_delta = 1e300;
      for (int k = 0; k < 50; ++k) {
        double r1 = 0.5 + rng.uniform(), r2 = 0.5 + rng.uniform();
        if (r1 > r2) std::swap(r1, r2);
        const Vec c1 = uniform_sphere(Dim(2), rng) * r1;
        const Vec c2 = uniform_sphere(Dim(2), rng) * r2;
        const double delta = distance(c1, c2);
        if (delta < 0.2) continue;
        const MCEstimate v = mc_union_ball_volume(c1, r1, c2, r2, model, 100'000, 2000 + k);
        const double single = k_d_alpha(Dim(2), a) * std::pow(r2, 2 + a);
        CHECK(v.mean >= single - 3 * v.std_error);
        gap_per_delta = std::min(gap_per_delta, (v.mean - single) / delta);
      }
      MESSAGE("alpha=" << a << ": smallest (union - single) / delta = " << gap_per_delta);
    }
  }
}
