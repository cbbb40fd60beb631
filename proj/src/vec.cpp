#include "pvc/vec.hpp"

#include <algorithm>
#include <utility>

#include "pvc/error.hpp"

namespace pvc {

Vec::Vec(std::initializer_list<double> coords) : dim_(static_cast<int>(coords.size())) {
  if (dim_ > kMaxDim) throw Error(ErrorCode::DimensionMismatch, "too many coordinates");
  std::copy(coords.begin(), coords.end(), c_.begin());
}

bool operator==(const Vec& a, const Vec& b) noexcept {
  if (a.dim_ != b.dim_) return false;
  for (int i = 0; i < a.dim_; ++i)
    if (a.c_[i] != b.c_[i]) return false;
  return true;
}

std::optional<Vec> solve_linear(SmallMatrix A, std::span<const double> b) {
  const int m = A.rows;
  const int n = A.cols;
  std::array<double, SmallMatrix::kCap> rhs{};
  std::copy(b.begin(), b.end(), rhs.begin());

  double scale = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(A(i, j)));
  if (scale == 0) return std::nullopt;
  const double tiny = kPivotRatio * scale;

  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < m; ++i)
      if (std::abs(A(i, k)) > std::abs(A(p, k))) p = i;
    if (std::abs(A(p, k)) < tiny) return std::nullopt;
    if (p != k) {
      std::swap(A.a[p], A.a[k]);
      std::swap(rhs[p], rhs[k]);
    }
    const double inv = 1.0 / A(k, k);
    for (int i = k + 1; i < m; ++i) {
      const double f = A(i, k) * inv;
      if (f == 0) continue;
      for (int j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
      rhs[i] -= f * rhs[k];
    }
  }

  Vec x(n);
  for (int k = n - 1; k >= 0; --k) {
    double s = rhs[k];
    for (int j = k + 1; j < n; ++j) s -= A(k, j) * x[j];
    x[k] = s / A(k, k);
  }
  return x;
}

double abs_determinant(SmallMatrix A) {
  const int n = A.rows;
  double det = 1;
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(p, k))) p = i;
    if (A(p, k) == 0) return 0;
    if (p != k) std::swap(A.a[p], A.a[k]);
    det *= A(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double f = A(i, k) / A(k, k);
      for (int j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
    }
  }
  return std::abs(det);
}

}  // namespace pvc
