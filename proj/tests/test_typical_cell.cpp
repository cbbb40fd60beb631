#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pvc/constants.hpp"
#include "pvc/error.hpp"
#include "pvc/geometry.hpp"
#include "pvc/stats.hpp"
#include "pvc/typical_cell.hpp"

using namespace pvc;

namespace {

struct PolyVertex {
  Vec at;
  bool pointy;
};

// Cell of the origin in the plane by clipping a large square with every
// bisector half-plane <x, g> <= |g|^2 / 2. Pointy vertices are the local
// maxima of |x| along the boundary.
std::vector<PolyVertex> clipped_polygon(const std::vector<Vec>& generators, double half_width) {
  const double w = half_width;
  std::vector<Vec> poly = {{-w, -w}, {w, -w}, {w, w}, {-w, w}};
  for (const auto& g : generators) {
    const double b = dot(g, g) / 2;
    std::vector<Vec> next;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec& p = poly[i];
      const Vec& q = poly[(i + 1) % poly.size()];
      const double fp = dot(p, g) - b, fq = dot(q, g) - b;
      if (fp <= 0) next.push_back(p);
      if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) next.push_back(p + (q - p) * (fp / (fp - fq)));
    }
    poly = std::move(next);
  }
  // Drop near-duplicate points produced by clipping through a corner.
  std::vector<Vec> clean;
  for (const auto& p : poly)
    if (clean.empty() || distance(clean.back(), p) > 1e-12) clean.push_back(p);
  if (clean.size() > 1 && distance(clean.front(), clean.back()) <= 1e-12) clean.pop_back();

  std::vector<PolyVertex> out;
  const std::size_t n = clean.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& v = clean[i];
    const Vec& prev = clean[(i + n - 1) % n];
    const Vec& next = clean[(i + 1) % n];
    out.push_back({v, dot(v, prev - v) < 0 && dot(v, next - v) < 0});
  }
  return out;
}

double max_pointy_norm(const TypicalCell& cell) {
  double m = 0;
  for (const auto& v : cell.vertices)
    if (v.pointy) m = std::max(m, v.norm);
  return m;
}

}  // namespace

TEST_CASE("small hand-made configurations") {
  const std::vector<Vec> square = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const VertexEnumeration e = enumerate_vertices(square, 10);
  CHECK(e.vertices.size() == 4);
  CHECK(e.singular_subsets == 2);  // the antipodal pairs
  CHECK(e.empty_ball_ties == 0);
  for (const auto& v : e.vertices) {
    CHECK(v.norm == doctest::Approx(std::sqrt(0.5)));
    CHECK(v.pointy);
  }
  CHECK(vertices_close_up(e.vertices, 2));

  // Four generators on one circle through the origin make a tie.
  const std::vector<Vec> cocircular = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}};
  CHECK(enumerate_vertices(cocircular, 10).empty_ball_ties > 0);

  // A half-plane alone never closes up.
  const std::vector<Vec> one = {{1, 0}};
  CHECK_FALSE(certify_cell(one, 10, 2).certified);
}

TEST_CASE("agrees with half-plane clipping in the plane") {
  int compared = 0;
  for (std::uint64_t i = 0; compared < 100; ++i) {
    RngStream rng(21, i);
    const TypicalCell cell = build_typical_cell(Dim(2), IntensityModel::homogeneous(), rng);
    if (cell.degenerate()) continue;
    const auto poly = clipped_polygon(cell.generators, cell.sampled_radius);
    REQUIRE(poly.size() == cell.vertices.size());
    for (const auto& pv : poly) {
      const auto it = std::find_if(cell.vertices.begin(), cell.vertices.end(),
                                   [&](const Vertex& v) { return distance(v.location, pv.at) <= 1e-9; });
      REQUIRE(it != cell.vertices.end());
      CHECK(it->pointy == pv.pointy);
    }
    ++compared;
  }
}

TEST_CASE("certified cells are complete") {
  for (int d : {2, 3}) {
    const int cells = d == 2 ? 1000 : 200;
    for (int i = 0; i < cells; ++i) {
      RngStream rng(22 + d, i);
      const TypicalCell cell = build_typical_cell(Dim(d), IntensityModel::homogeneous(), rng);
      if (cell.degenerate()) continue;
      CHECK(2 * cell.max_vertex_distance <= cell.sampled_radius);
      CHECK(vertices_close_up(cell.vertices, d));
      // Raising the bound to the full certified radius adds nothing.
      const VertexEnumeration wide = enumerate_vertices(cell.generators, cell.sampled_radius / 2);
      CHECK(wide.vertices.size() == cell.vertices.size());
      if (d == 2) CHECK(cell.vertices.size() >= 3);
      if (d == 3) CHECK(cell.vertices.size() >= 4);
    }
  }
}

TEST_CASE("the farthest vertex is pointy") {
  for (double a : {0.0, 1.0, -1.0})
    for (int i = 0; i < 10'000; ++i) {
      RngStream rng(25, i);
      const TypicalCell cell = build_typical_cell(Dim(2), IntensityModel::with_alpha(a), rng);
      if (cell.degenerate()) continue;
      double farthest = 0;
      for (const auto& v : cell.vertices) farthest = std::max(farthest, v.norm);
      REQUIRE(cell.max_vertex_distance == farthest);
      REQUIRE(max_pointy_norm(cell) == farthest);
    }
}

TEST_CASE("vertex records are consistent") {
  RngStream rng(26, 0);
  const TypicalCell cell = build_typical_cell(Dim(3), IntensityModel::homogeneous(), rng);
  for (const auto& v : cell.vertices) {
    CHECK(v.norm == doctest::Approx(norm(v.location)));
    const auto idx = v.nuclei();
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    std::vector<Vec> nuclei;
    for (auto k : idx) {
      CHECK(distance(cell.generators[k], v.location) == doctest::Approx(v.norm).epsilon(1e-9));
      nuclei.push_back(cell.generators[k]);
    }
    CHECK(is_pointy(v.location, nuclei) == v.pointy);
    for (const auto& g : cell.generators) CHECK(distance(g, v.location) >= v.norm * (1 - 1e-9));
  }
}

TEST_CASE("pointy counts match the closed-form expectation") {
  for (double a : {0.0, 1.0}) {
    const std::vector<double> ts = {0.0, 0.5, 1.0};
    std::vector<RunningStats> s(ts.size());
    for (int i = 0; i < 20'000; ++i) {
      RngStream rng(27, i);
      const TypicalCell cell = build_typical_cell(Dim(2), IntensityModel::with_alpha(a), rng);
      if (cell.degenerate()) continue;
      for (std::size_t k = 0; k < ts.size(); ++k)
        s[k].add(static_cast<double>(count_pointy_at_least(cell, ts[k])));
    }
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double exact = expected_pointy_count(Dim(2), a, ts[k]);
      INFO("alpha=" << a << " t=" << ts[k] << " mean=" << s[k].mean() << " exact=" << exact);
      CHECK(std::abs(s[k].mean() - exact) <= 3 * s[k].std_error());
    }
  }
}

TEST_CASE("pair counts") {
  for (int i = 0; i < 200; ++i) {
    RngStream rng(28, i);
    const TypicalCell cell = build_typical_cell(Dim(2), IntensityModel::homogeneous(), rng);
    for (double t : {0.0, 0.5, 1.0}) {
      const auto k = count_pointy_at_least(cell, t);
      CHECK(count_pointy_pairs_at_least(cell, t) == k * (k - 1) / 2);
    }
    CHECK(count_pointy_at_least(cell, cell.max_vertex_distance) >= 1);
    CHECK(count_pointy_at_least(cell, std::nextafter(cell.max_vertex_distance, 1e9)) == 0);
  }
}

TEST_CASE("reproducible and bounded") {
  for (int i = 0; i < 50; ++i) {
    RngStream a(29, i), b(29, i);
    const TypicalCell x = build_typical_cell(Dim(3), IntensityModel::homogeneous(), a);
    const TypicalCell y = build_typical_cell(Dim(3), IntensityModel::homogeneous(), b);
    REQUIRE(x.vertices.size() == y.vertices.size());
    CHECK(x.max_vertex_distance == y.max_vertex_distance);
    CHECK(x.sampled_radius == y.sampled_radius);
    for (std::size_t k = 0; k < x.vertices.size(); ++k) CHECK(x.vertices[k].location == y.vertices[k].location);
    CHECK(x.master_seed == 29);
    CHECK(x.replicate_index == static_cast<std::uint64_t>(i));
  }
  CHECK(default_initial_radius(Dim(2), IntensityModel::homogeneous()) ==
        doctest::Approx(2 / std::sqrt(std::numbers::pi)));

  RngStream rng(30, 0);
  CellOptions tiny;
  tiny.initial_radius = 1e-3;
  tiny.max_radius_factor = 1;
  CHECK_THROWS_AS(build_typical_cell(Dim(2), IntensityModel::homogeneous(), rng, tiny), Error);
}
