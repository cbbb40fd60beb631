#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <optional>
#include <span>

#include "pvc/constants.hpp"

namespace pvc {

/// Point or direction in R^d with d <= kMaxDim, stored inline.
class Vec {
 public:
  Vec() = default;
  explicit Vec(int dim) : dim_(dim) {}
  Vec(std::initializer_list<double> coords);

  int dim() const noexcept { return dim_; }
  double& operator[](int i) noexcept { return c_[i]; }
  double operator[](int i) const noexcept { return c_[i]; }
  const double* data() const noexcept { return c_.data(); }
  const double* begin() const noexcept { return c_.data(); }
  const double* end() const noexcept { return c_.data() + dim_; }

  Vec& operator+=(const Vec& o) noexcept {
    for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) noexcept {
    for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Vec& operator*=(double s) noexcept {
    for (int i = 0; i < dim_; ++i) c_[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) noexcept { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) noexcept { return a -= b; }
  friend Vec operator*(Vec a, double s) noexcept { return a *= s; }
  friend Vec operator*(double s, Vec a) noexcept { return a *= s; }
  friend bool operator==(const Vec& a, const Vec& b) noexcept;

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

inline double dot(const Vec& a, const Vec& b) noexcept {
  double s = 0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}
inline double norm2(const Vec& a) noexcept { return dot(a, a); }
inline double norm(const Vec& a) noexcept { return std::sqrt(norm2(a)); }
inline double distance(const Vec& a, const Vec& b) noexcept { return norm(a - b); }

/// Dense row-major matrix of at most (kMaxDim + 1) x (kMaxDim + 1).
struct SmallMatrix {
  static constexpr int kCap = kMaxDim + 1;
  int rows = 0;
  int cols = 0;
  std::array<std::array<double, kCap>, kCap> a{};

  SmallMatrix(int r, int c) : rows(r), cols(c) {}
  double& operator()(int i, int j) noexcept { return a[i][j]; }
  double operator()(int i, int j) const noexcept { return a[i][j]; }
};

/// Pivot threshold relative to the largest coefficient magnitude.
inline constexpr double kPivotRatio = 1e-10;

/// Solves A x = b for rows >= cols by partial-pivot elimination over all
/// rows. Returns nullopt when |pivot| / max|A| < kPivotRatio. Surplus rows
/// are assumed consistent and are not checked.
std::optional<Vec> solve_linear(SmallMatrix A, std::span<const double> b);

/// |det| of a square matrix by partial-pivot elimination.
double abs_determinant(SmallMatrix A);

}  // namespace pvc
