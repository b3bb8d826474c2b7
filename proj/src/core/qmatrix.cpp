#include "clqa/qmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "clqa/error.hpp"
#include "clqa/kernels.hpp"

namespace clqa {

QMatrix::QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) {
    throw DimensionMismatch("QMatrix dimensions must be positive, got " +
                            std::to_string(rows) + "x" + std::to_string(cols));
  }
  data_.assign(4 * rows * cols, 0.0);
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  auto w = m.plane(Component::W);
  for (std::size_t i = 0; i < n; ++i) w[i * n + i] = 1.0;
  return m;
}

QMatrix QMatrix::from_real(std::size_t rows, std::size_t cols, std::span<const double> values) {
  QMatrix m(rows, cols);
  if (values.size() != rows * cols) {
    throw DimensionMismatch("from_real: expected " + std::to_string(rows * cols) +
                            " values, got " + std::to_string(values.size()));
  }
  std::copy(values.begin(), values.end(), m.plane(Component::W).begin());
  return m;
}

std::string QMatrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

std::array<double*, 4> QMatrix::plane_pointers() {
  const std::size_t n = size();
  double* base = data_.data();
  return {base, base + n, base + 2 * n, base + 3 * n};
}

std::array<const double*, 4> QMatrix::plane_pointers() const {
  const std::size_t n = size();
  const double* base = data_.data();
  return {base, base + n, base + 2 * n, base + 3 * n};
}

namespace {
void require_same_shape(const QMatrix& a, const QMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(op) + ": shapes " + a.shape_string() + " and " +
                            b.shape_string() + " differ");
  }
}
}  // namespace

QMatrix& QMatrix::operator+=(const QMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

QMatrix& QMatrix::operator-=(const QMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

QMatrix& QMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

QMatrix QMatrix::columns(std::size_t first, std::size_t count) const {
  if (first + count > cols_ || count == 0) {
    throw DimensionMismatch("columns: range [" + std::to_string(first) + ", " +
                            std::to_string(first + count) + ") outside " + shape_string());
  }
  QMatrix out(rows_, count);
  for (int p = 0; p < 4; ++p) {
    const auto src = plane(static_cast<Component>(p));
    auto dst = out.plane(static_cast<Component>(p));
    for (std::size_t r = 0; r < rows_; ++r) {
      std::copy_n(src.begin() + r * cols_ + first, count, dst.begin() + r * count);
    }
  }
  return out;
}

QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
QMatrix operator*(QMatrix a, double s) { return a *= s; }

QMatrix matmul(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("matmul: inner dimensions differ (" + a.shape_string() + " * " +
                            b.shape_string() + ")");
  }
  QMatrix c(a.rows(), b.cols());
  const auto pa = a.plane_pointers();
  const auto pb = b.plane_pointers();
  auto pc = c.plane_pointers();
  kernels::active().qgemm(pa.data(), pb.data(), pc.data(), a.rows(), a.cols(), b.cols());
  return c;
}

QMatrix conj_transpose(const QMatrix& a) {
  QMatrix t(a.cols(), a.rows());
  for (int p = 0; p < 4; ++p) {
    const auto src = a.plane(static_cast<Component>(p));
    auto dst = t.plane(static_cast<Component>(p));
    const double sign = p == 0 ? 1.0 : -1.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      for (std::size_t c = 0; c < a.cols(); ++c) {
        dst[c * a.rows() + r] = sign * src[r * a.cols() + c];
      }
    }
  }
  return t;
}

double squared_frobenius_norm(const QMatrix& a) {
  const auto raw = a.raw();
  return kernels::active().sum_squares(raw.data(), raw.size());
}

double frobenius_norm(const QMatrix& a) { return std::sqrt(squared_frobenius_norm(a)); }

double trace_gram(const QMatrix& a) {
  const QMatrix g = matmul(conj_transpose(a), a);
  double tr = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i) tr += g(i, i).w;
  return tr;
}

QMatrix outer(const QMatrix& u, const QMatrix& v) {
  if (u.cols() != 1 || v.cols() != 1) {
    throw DimensionMismatch("outer: expected column vectors, got " + u.shape_string() +
                            " and " + v.shape_string());
  }
  return matmul(u, conj_transpose(v));
}

QMatrix random_gaussian_qmatrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  QMatrix m(rows, cols);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : m.raw()) v = normal(gen);
  return m;
}

QMatrix solve_linear(const QMatrix& a, const QMatrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) {
    throw DimensionMismatch("solve_linear: coefficient matrix " + a.shape_string() +
                            " is not square");
  }
  if (b.rows() != n) {
    throw DimensionMismatch("solve_linear: right-hand side " + b.shape_string() +
                            " does not match " + a.shape_string());
  }
  const std::size_t m = b.cols();

  // Row-of-quaternions working copies; row swaps stay cheap.
  std::vector<std::vector<Quaternion>> lhs(n, std::vector<Quaternion>(n));
  std::vector<std::vector<Quaternion>> rhs(n, std::vector<Quaternion>(m));
  double max_entry = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      lhs[r][c] = a(r, c);
      max_entry = std::max(max_entry, modulus(lhs[r][c]));
    }
    for (std::size_t c = 0; c < m; ++c) rhs[r][c] = b(r, c);
  }
  const double pivot_floor = 1e-12 * max_entry;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    double best_mod = modulus(lhs[k][k]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double mod = modulus(lhs[r][k]);
      if (mod > best_mod) {
        best = r;
        best_mod = mod;
      }
    }
    if (!(best_mod > pivot_floor)) throw SingularMatrix(k);
    std::swap(lhs[k], lhs[best]);
    std::swap(rhs[k], rhs[best]);

    const Quaternion pivot_inv = inverse(lhs[k][k]);
    for (std::size_t r = k + 1; r < n; ++r) {
      // Left factor f with f * pivot = lhs[r][k].
      const Quaternion f = lhs[r][k] * pivot_inv;
      if (f == Quaternion{}) continue;
      lhs[r][k] = Quaternion{};
      for (std::size_t c = k + 1; c < n; ++c) lhs[r][c] -= f * lhs[k][c];
      for (std::size_t c = 0; c < m; ++c) rhs[r][c] -= f * rhs[k][c];
    }
  }

  QMatrix z(n, m);
  for (std::size_t kk = n; kk-- > 0;) {
    const Quaternion pivot_inv = inverse(lhs[kk][kk]);
    for (std::size_t c = 0; c < m; ++c) {
      Quaternion acc = rhs[kk][c];
      for (std::size_t j = kk + 1; j < n; ++j) acc -= lhs[kk][j] * z(j, c);
      z.set(kk, c, pivot_inv * acc);
    }
  }
  return z;
}

double max_abs_diff(const QMatrix& a, const QMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      worst = std::max(worst, modulus(a(r, c) - b(r, c)));
    }
  }
  return worst;
}

}  // namespace clqa
