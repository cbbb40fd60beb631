#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "pvc/constants.hpp"
#include "pvc/sampling.hpp"
#include "pvc/vec.hpp"

namespace pvc {

/// Relative tolerance of the empty-ball test. A generator whose distance to
/// a candidate vertex matches the radius within it is a tie.
inline constexpr double kEmptyBallTolerance = 1e-12;

struct Vertex {
  Vec location;
  std::array<std::int32_t, kMaxDim> nucleus_indices{};  // first d entries, ascending
  double norm = 0;
  bool pointy = false;

  std::span<const std::int32_t> nuclei() const {
    return {nucleus_indices.data(), static_cast<std::size_t>(location.dim())};
  }
};

struct VertexEnumeration {
  std::vector<Vertex> vertices;
  std::int64_t singular_subsets = 0;   // skipped d-subsets with a near-singular solve
  std::int64_t degenerate_pointy = 0;  // vertices whose pointy test hit the boundary band
  std::int64_t empty_ball_ties = 0;    // vertices with a further generator on the sphere

  bool degenerate() const noexcept { return singular_subsets > 0 || degenerate_pointy > 0 || empty_ball_ties > 0; }
};

/// All vertices of the cell of the origin under generators U {0} with norm at
/// most norm_bound. Brute force over d-subsets of the generators lying within
/// 2 * norm_bound, each checked against the empty-ball property.
VertexEnumeration enumerate_vertices(std::span<const Vec> generators, double norm_bound);

/// True when every edge of every vertex (a (d-1)-subset of its nuclei) is
/// shared by exactly two listed vertices, i.e. the listed vertices close up
/// into a bounded cell.
bool vertices_close_up(std::span<const Vertex> vertices, int d);

/// Vertices of the origin's cell when `generators` holds every point within
/// `radius`. Enumerates under growing norm bounds up to radius/2 and stops at
/// the first bound whose vertices close up; certified is false otherwise.
struct CertifiedCell {
  bool certified = false;
  VertexEnumeration enumeration;
  double max_vertex_distance = 0;
};
CertifiedCell certify_cell(std::span<const Vec> generators, double radius, int d);

struct TypicalCell {
  std::vector<Vec> generators;
  std::vector<Vertex> vertices;
  double max_vertex_distance = 0;  // D
  double sampled_radius = 0;
  IntensityModel model = IntensityModel::homogeneous();
  std::uint64_t master_seed = 0;
  std::uint64_t replicate_index = 0;
  int passes = 0;
  std::int64_t singular_subsets = 0;   // in the final pass
  std::int64_t degenerate_pointy = 0;  // in the final pass
  std::int64_t empty_ball_ties = 0;    // in the final pass

  /// Degenerate cells are returned uncertified and must be discarded.
  bool degenerate() const noexcept { return singular_subsets > 0 || degenerate_pointy > 0 || empty_ball_ties > 0; }
};

struct CellOptions {
  double initial_radius = 0;       // 0 selects the default R0
  double max_radius_factor = 64;   // RadiusCapExceeded beyond factor * R0
  double growth = 2;               // radius multiplier between passes
};

/// Radius R0 with m_alpha(B_R0) = 2^d.
double default_initial_radius(Dim d, const IntensityModel& model);

/// Samples the process in geometrically growing balls until the cell of the origin is
/// certified. Throws RadiusCapExceeded when the cap is hit.
TypicalCell build_typical_cell(Dim d, const IntensityModel& model, RngStream& rng,
                               const CellOptions& opts = {});

std::int64_t count_pointy_at_least(const TypicalCell& cell, double t);

/// Unordered pairs k(k-1)/2 of pointy vertices at distance >= t.
std::int64_t count_pointy_pairs_at_least(const TypicalCell& cell, double t);

}  // namespace pvc
