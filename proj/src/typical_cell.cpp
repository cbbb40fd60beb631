#include "pvc/typical_cell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "pvc/error.hpp"
#include "pvc/geometry.hpp"

namespace pvc {

namespace {

constexpr double kFirstBoundFactor = 1.25;
constexpr double kBoundGrowth = 1.25;

// Solves the d x d system in place (row-major, stride kMaxDim + 1, rhs in
// the last column) with the same pivot rule as solve_linear.
bool solve_in_place(double (*a)[kMaxDim + 1], int d, double* x) {
  double scale = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) scale = std::max(scale, std::abs(a[i][j]));
  const double tiny = kPivotRatio * scale;
  if (scale == 0) return false;
  if (d == 2) {
    int p = std::abs(a[1][0]) > std::abs(a[0][0]) ? 1 : 0;
    const double* r0 = a[p];
    const double* r1 = a[1 - p];
    if (std::abs(r0[0]) < tiny) return false;
    const double f = r1[0] / r0[0];
    const double a11 = r1[1] - f * r0[1];
    if (std::abs(a11) < tiny) return false;
    x[1] = (r1[2] - f * r0[2]) / a11;
    x[0] = (r0[2] - r0[1] * x[1]) / r0[0];
    return true;
  }
  for (int k = 0; k < d; ++k) {
    int p = k;
    for (int i = k + 1; i < d; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    if (std::abs(a[p][k]) < tiny) return false;
    if (p != k)
      for (int j = k; j <= d; ++j) std::swap(a[p][j], a[k][j]);
    const double inv = 1.0 / a[k][k];
    for (int i = k + 1; i < d; ++i) {
      const double f = a[i][k] * inv;
      for (int j = k + 1; j <= d; ++j) a[i][j] -= f * a[k][j];
    }
  }
  for (int k = d - 1; k >= 0; --k) {
    double s = a[k][d];
    for (int j = k + 1; j < d; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return true;
}

// (d+1) x d system with rhs in column d, eliminated with row pivoting over
// all d+1 rows as in solve_linear.
bool solve_overdetermined(double (*a)[kMaxDim + 1], int d, double* x) {
  double scale = 0;
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j < d; ++j) scale = std::max(scale, std::abs(a[i][j]));
  if (scale == 0) return false;
  const double tiny = kPivotRatio * scale;
  for (int k = 0; k < d; ++k) {
    int p = k;
    for (int i = k + 1; i <= d; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    if (std::abs(a[p][k]) < tiny) return false;
    if (p != k)
      for (int j = k; j <= d; ++j) std::swap(a[p][j], a[k][j]);
    const double inv = 1.0 / a[k][k];
    for (int i = k + 1; i <= d; ++i) {
      const double f = a[i][k] * inv;
      for (int j = k + 1; j <= d; ++j) a[i][j] -= f * a[k][j];
    }
  }
  for (int k = d - 1; k >= 0; --k) {
    double s = a[k][d];
    for (int j = k + 1; j < d; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return true;
}

// Generators sorted by norm, enumerated under a norm bound that may grow
// without re-sorting.
class SubsetEnumerator {
 public:
  explicit SubsetEnumerator(std::span<const Vec> generators, double reach = -1) {
    d_ = generators.empty() ? 0 : generators[0].dim();
    const double reach2 = reach < 0 ? std::numeric_limits<double>::infinity() : reach * reach * (1 + 1e-9);
    std::vector<std::pair<double, std::int32_t>> order;
    order.reserve(generators.size());
    for (std::size_t i = 0; i < generators.size(); ++i) {
      const double n2 = norm2(generators[i]);
      if (n2 <= reach2) order.emplace_back(n2, static_cast<std::int32_t>(i));
    }
    std::sort(order.begin(), order.end());
    total_ = static_cast<int>(order.size());
    coords_.resize(static_cast<std::size_t>(total_) * d_);
    n2_.resize(total_);
    index_.resize(total_);
    for (int k = 0; k < total_; ++k) {
      n2_[k] = order[k].first;
      index_[k] = order[k].second;
      const Vec& g = generators[order[k].second];
      for (int j = 0; j < d_; ++j) coords_[k * d_ + j] = g[j];
    }
  }

  double nearest_norm() const { return total_ > 0 ? std::sqrt(n2_[0]) : 0.0; }

  VertexEnumeration run(double bound) {
    VertexEnumeration out;
    out_ = &out;
    bound_ = bound;
    pair2_ = 4.0 * bound * bound * (1 + 1e-9);
    n_ = static_cast<int>(std::upper_bound(n2_.begin(), n2_.end(), pair2_) - n2_.begin());
    if (d_ > 0 && n_ >= d_) recurse(0, 0);
    std::sort(out.vertices.begin(), out.vertices.end(), [d = d_](const Vertex& a, const Vertex& b) {
      return std::lexicographical_compare(a.nucleus_indices.begin(), a.nucleus_indices.begin() + d,
                                          b.nucleus_indices.begin(), b.nucleus_indices.begin() + d);
    });
    out_ = nullptr;
    return out;
  }

 private:
  const double* at(int k) const { return coords_.data() + static_cast<std::size_t>(k) * d_; }

  // Nuclei of a vertex at norm <= bound lie on a sphere of radius <= bound,
  // so any two of them are within 2 * bound of each other.
  bool close_to_picked(int depth, int k) const {
    const double* g = at(k);
    for (int r = 0; r < depth; ++r) {
      const double* h = at(pick_[r]);
      double s = 0;
      for (int j = 0; j < d_; ++j) s += (g[j] - h[j]) * (g[j] - h[j]);
      if (s > pair2_) return false;
    }
    return true;
  }

  void recurse(int depth, int start) {
    for (int i = start; i <= n_ - (d_ - depth); ++i) {
      if (!close_to_picked(depth, i)) continue;
      pick_[depth] = i;
      if (depth + 1 == d_) {
        visit();
      } else {
        recurse(depth + 1, i + 1);
      }
    }
  }

  void visit() {
    double a[kMaxDim][kMaxDim + 1];
    for (int r = 0; r < d_; ++r) {
      const double* g = at(pick_[r]);
      for (int j = 0; j < d_; ++j) a[r][j] = g[j];
      a[r][d_] = 0.5 * n2_[pick_[r]];
    }
    double c[kMaxDim];
    if (!solve_in_place(a, d_, c)) {
      ++out_->singular_subsets;
      return;
    }
    double c2 = 0;
    for (int j = 0; j < d_; ++j) c2 += c[j] * c[j];
    if (c2 > bound_ * bound_) return;
    // |g - c|^2 - |c|^2 = |g|^2 - 2<g,c>; negative beyond the band means g is
    // strictly inside the ball, inside the band is a tie.
    const double band = 2.0 * kEmptyBallTolerance * c2;
    const double reach2 = 4.0 * c2 * (1 + 1e-9);
    bool tie = false;
    int member = 0;
    for (int k = 0; k < total_; ++k) {
      if (n2_[k] > reach2) break;
      if (member < d_ && pick_[member] == k) {
        ++member;
        continue;
      }
      const double* g = at(k);
      double gc = 0;
      for (int j = 0; j < d_; ++j) gc += g[j] * c[j];
      const double q = n2_[k] - 2.0 * gc;
      if (q < -band) return;
      if (q <= band) tie = true;
    }
    if (tie) ++out_->empty_ball_ties;

    Vertex v;
    v.location = Vec(d_);
    for (int j = 0; j < d_; ++j) v.location[j] = c[j];
    v.norm = std::sqrt(c2);
    for (int r = 0; r < d_; ++r) v.nucleus_indices[r] = index_[pick_[r]];
    std::sort(v.nucleus_indices.begin(), v.nucleus_indices.begin() + d_);
    if (v.norm >= 1e-12) {
      const HullTest h = pointy_test(c, std::sqrt(c2));
      v.pointy = h.inside;
      if (h.degenerate) ++out_->degenerate_pointy;
    }
    out_->vertices.push_back(v);
  }

  // classify_pointy on the picked nuclei without building Vec temporaries.
  HullTest pointy_test(const double* c, double cn) const {
    double u0[kMaxDim];
    for (int j = 0; j < d_; ++j) u0[j] = c[j] / cn;
    // Columns are projected unit vectors; the last row holds the affine constraint.
    double m[kMaxDim + 1][kMaxDim + 1];
    for (int r = 0; r < d_; ++r) {
      const double* g = at(pick_[r]);
      double u[kMaxDim];
      double un = 0;
      for (int j = 0; j < d_; ++j) {
        u[j] = g[j] - c[j];
        un += u[j] * u[j];
      }
      un = 1.0 / std::sqrt(un);
      double along = 0;
      for (int j = 0; j < d_; ++j) {
        u[j] *= un;
        along += u[j] * u0[j];
      }
      for (int j = 0; j < d_; ++j) m[j][r] = u[j] - along * u0[j];
      m[d_][r] = 1.0;
    }
    for (int j = 0; j < d_; ++j) m[j][d_] = 0.0;
    m[d_][d_] = 1.0;
    double lambda[kMaxDim];
    if (!solve_overdetermined(m, d_, lambda)) return {false, true};
    bool inside = true;
    for (int i = 0; i < d_; ++i) {
      if (std::abs(lambda[i]) <= kHullTolerance) return {false, true};
      if (lambda[i] < 0) inside = false;
    }
    return {inside, false};
  }

  int d_ = 0;
  int total_ = 0;
  int n_ = 0;
  double bound_ = 0;
  double pair2_ = 0;
  VertexEnumeration* out_ = nullptr;
  std::vector<double> coords_;
  std::vector<double> n2_;
  std::vector<std::int32_t> index_;
  std::array<int, kMaxDim> pick_{};
};

}  // namespace

VertexEnumeration enumerate_vertices(std::span<const Vec> generators, double norm_bound) {
  if (generators.empty()) return {};
  const int d = generators[0].dim();
  for (const auto& g : generators) {
    if (g.dim() != d) throw Error(ErrorCode::DimensionMismatch, "generators differ in dimension");
  }
  return SubsetEnumerator(generators).run(norm_bound);
}

bool vertices_close_up(std::span<const Vertex> vertices, int d) {
  if (static_cast<int>(vertices.size()) < d + 1) return false;
  std::vector<std::array<std::int32_t, kMaxDim>> edges;
  edges.reserve(vertices.size() * d);
  for (const auto& v : vertices) {
    for (int drop = 0; drop < d; ++drop) {
      std::array<std::int32_t, kMaxDim> key{};
      int k = 0;
      for (int j = 0; j < d; ++j)
        if (j != drop) key[k++] = v.nucleus_indices[j];
      edges.push_back(key);
    }
  }
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i;
    while (j < edges.size() && edges[j] == edges[i]) ++j;
    if (j - i != 2) return false;
    i = j;
  }
  return true;
}

CertifiedCell certify_cell(std::span<const Vec> generators, double radius, int d) {
  CertifiedCell out;
  if (static_cast<int>(generators.size()) < d + 1) return out;
  const double limit = 0.5 * radius;
  SubsetEnumerator e(generators, radius);
  // Every vertex lies beyond half the nearest generator distance.
  double bound = std::min(limit, std::max(e.nearest_norm(), 1e-300) * kFirstBoundFactor);
  for (;;) {
    out.enumeration = e.run(bound);
    if (vertices_close_up(out.enumeration.vertices, d)) {
      out.certified = true;
      break;
    }
    // A tie or singular subset can break closure at every bound.
    if (out.enumeration.degenerate()) break;
    if (bound >= limit) break;
    bound = std::min(limit, bound * kBoundGrowth);
  }
  for (const auto& v : out.enumeration.vertices) out.max_vertex_distance = std::max(out.max_vertex_distance, v.norm);
  return out;
}

double default_initial_radius(Dim d, const IntensityModel& model) {
  return model.radius_for_measure(d, std::ldexp(1.0, d));
}

TypicalCell build_typical_cell(Dim d, const IntensityModel& model, RngStream& rng, const CellOptions& opts) {
  model.validate(d);
  const double r0 = opts.initial_radius > 0 ? opts.initial_radius : default_initial_radius(d, model);
  const double cap = opts.max_radius_factor * r0;

  TypicalCell cell;
  cell.model = model;
  cell.master_seed = rng.master_seed();
  cell.replicate_index = rng.replicate_index();
  double radius = r0;
  cell.generators = poisson_annulus(d, model, 0.0, radius, rng);
  for (;;) {
    ++cell.passes;
    CertifiedCell cc = certify_cell(cell.generators, radius, d);
    if (cc.certified || cc.enumeration.degenerate()) {
      cell.vertices = std::move(cc.enumeration.vertices);
      cell.singular_subsets = cc.enumeration.singular_subsets;
      cell.degenerate_pointy = cc.enumeration.degenerate_pointy;
      cell.empty_ball_ties = cc.enumeration.empty_ball_ties;
      cell.max_vertex_distance = cc.max_vertex_distance;
      cell.sampled_radius = radius;
      return cell;
    }
    const double next = radius * opts.growth;
    if (next > cap * (1 + 1e-12)) {
      throw Error(ErrorCode::RadiusCapExceeded, "typical cell not certified within the radius cap");
    }
    auto shell = poisson_annulus(d, model, radius, next, rng);
    cell.generators.insert(cell.generators.end(), shell.begin(), shell.end());
    radius = next;
  }
}

std::int64_t count_pointy_at_least(const TypicalCell& cell, double t) {
  if (!(t >= 0)) throw Error(ErrorCode::NegativeThreshold, "threshold t must be >= 0");
  return std::count_if(cell.vertices.begin(), cell.vertices.end(),
                       [t](const Vertex& v) { return v.pointy && v.norm >= t; });
}

std::int64_t count_pointy_pairs_at_least(const TypicalCell& cell, double t) {
  const std::int64_t k = count_pointy_at_least(cell, t);
  return k * (k - 1) / 2;
}

}  // namespace pvc
