#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pvc/vec.hpp"

namespace pvc {

inline constexpr int kCriterionCount = 9;

struct Check {
  std::string what;
  bool passed = false;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0;

  bool passed() const;
};

struct ValidationOptions {
  bool deep = false;           // full replicate counts instead of the reduced CI scale
  std::uint64_t seed = 20240601;
  int workers = 0;
  std::vector<int> only;       // empty runs every criterion
};

CriterionResult run_criterion(int id, const ValidationOptions& opts);
std::vector<CriterionResult> run_validation(const ValidationOptions& opts);

/// One line per criterion: "[PASS] 3 title (12.3 s)" followed by indented
/// lines for failing checks.
std::string format_criterion(const CriterionResult& r, bool verbose);

/// Signed determinant by partial-pivot elimination.
double signed_determinant(std::span<const Vec> columns);

/// Independent containment test for d points of R^d lying in the hyperplane
/// with unit normal `normal` through 0: for every facet of their simplex the
/// origin must lie strictly on the side of the opposite vertex. Returns
/// nothing when some orientation is within tolerance of zero.
std::optional<bool> origin_in_simplex_by_orientation(std::span<const Vec> points, const Vec& normal);

}  // namespace pvc
