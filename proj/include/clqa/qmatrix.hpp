#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "clqa/quaternion.hpp"

namespace clqa {

enum class Component : int { W = 0, X = 1, Y = 2, Z = 3 };

/// Dense quaternion matrix stored as four row-major real planes (w, x, y, z)
/// in one contiguous allocation. Plane p starts at offset p * rows * cols.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols);

  static QMatrix identity(std::size_t n);
  static QMatrix from_real(std::size_t rows, std::size_t cols, std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return rows_ * cols_; }
  bool empty() const noexcept { return size() == 0; }
  std::string shape_string() const;

  Quaternion operator()(std::size_t r, std::size_t c) const {
    const std::size_t at = r * cols_ + c;
    const std::size_t n = size();
    return {data_[at], data_[n + at], data_[2 * n + at], data_[3 * n + at]};
  }
  void set(std::size_t r, std::size_t c, const Quaternion& q) {
    const std::size_t at = r * cols_ + c;
    const std::size_t n = size();
    data_[at] = q.w;
    data_[n + at] = q.x;
    data_[2 * n + at] = q.y;
    data_[3 * n + at] = q.z;
  }

  std::span<double> plane(Component c) {
    return {data_.data() + static_cast<std::size_t>(c) * size(), size()};
  }
  std::span<const double> plane(Component c) const {
    return {data_.data() + static_cast<std::size_t>(c) * size(), size()};
  }
  std::array<double*, 4> plane_pointers();
  std::array<const double*, 4> plane_pointers() const;

  /// All four planes back to back.
  std::span<double> raw() { return data_; }
  std::span<const double> raw() const { return data_; }

  QMatrix& operator+=(const QMatrix& other);
  QMatrix& operator-=(const QMatrix& other);
  QMatrix& operator*=(double s);

  /// Column sub-block [first, first + count).
  QMatrix columns(std::size_t first, std::size_t count) const;

  friend bool operator==(const QMatrix&, const QMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

QMatrix operator+(QMatrix a, const QMatrix& b);
QMatrix operator-(QMatrix a, const QMatrix& b);
QMatrix operator*(QMatrix a, double s);

/// A * B with Hamilton products, left factor on the left. Throws
/// DimensionMismatch when the inner dimensions differ.
QMatrix matmul(const QMatrix& a, const QMatrix& b);

QMatrix conj_transpose(const QMatrix& a);

double frobenius_norm(const QMatrix& a);
double squared_frobenius_norm(const QMatrix& a);

/// Real part of trace(A^H A) evaluated as an explicit product; used to
/// cross-check frobenius_norm.
double trace_gram(const QMatrix& a);

/// Outer product u * v^H of two column vectors.
QMatrix outer(const QMatrix& u, const QMatrix& v);

/// Fills every plane with independent N(0, 1) draws from a generator seeded
/// with `seed`. Same seed gives a bit-identical matrix.
QMatrix random_gaussian_qmatrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// Solves A Z = B by Gaussian elimination with partial pivoting on entry
/// modulus. Throws SingularMatrix when a pivot falls below
/// 1e-12 * (largest initial entry modulus of A).
QMatrix solve_linear(const QMatrix& a, const QMatrix& b);

/// Largest entry modulus difference between two same-shaped matrices.
double max_abs_diff(const QMatrix& a, const QMatrix& b);

}  // namespace clqa
