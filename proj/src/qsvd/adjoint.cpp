#include "clqa/adjoint.hpp"

#include <algorithm>
#include <cmath>

#include "clqa/error.hpp"

namespace clqa {

ComplexMatrix complex_matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("complex_matmul: inner dimensions differ");
  }
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    double* cr = c.col_re(j);
    double* ci = c.col_im(j);
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const std::complex<double> blj = b(l, j);
      const double* ar = a.col_re(l);
      const double* ai = a.col_im(l);
      for (std::size_t i = 0; i < a.rows(); ++i) {
        cr[i] += ar[i] * blj.real() - ai[i] * blj.imag();
        ci[i] += ar[i] * blj.imag() + ai[i] * blj.real();
      }
    }
  }
  return c;
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::norm(a(i, j));
  }
  return std::sqrt(s);
}

ComplexMatrix to_adjoint(const QMatrix& q) {
  const std::size_t m = q.rows();
  const std::size_t n = q.cols();
  ComplexMatrix c(2 * m, 2 * n);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t col = 0; col < n; ++col) {
      const Quaternion e = q(r, col);
      const std::complex<double> a{e.w, e.x};
      const std::complex<double> b{e.y, e.z};
      c.set(r, col, a);
      c.set(r, n + col, b);
      c.set(m + r, col, -std::conj(b));
      c.set(m + r, n + col, std::conj(a));
    }
  }
  return c;
}

QMatrix from_adjoint(const ComplexMatrix& c, double tolerance) {
  if (c.rows() % 2 != 0 || c.cols() % 2 != 0 || c.rows() == 0 || c.cols() == 0) {
    throw DimensionMismatch("from_adjoint: dimensions must be even and positive");
  }
  const std::size_t m = c.rows() / 2;
  const std::size_t n = c.cols() / 2;
  QMatrix q(m, n);
  double deviation = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t col = 0; col < n; ++col) {
      const std::complex<double> a = c(r, col);
      const std::complex<double> b = c(r, n + col);
      deviation += std::norm(c(m + r, col) + std::conj(b));
      deviation += std::norm(c(m + r, n + col) - std::conj(a));
      q.set(r, col, {a.real(), a.imag(), b.real(), b.imag()});
    }
  }
  const double scale = frobenius_norm(c);
  const double relative = scale > 0.0 ? std::sqrt(deviation) / scale : std::sqrt(deviation);
  if (relative > tolerance) throw AsymmetryError(relative);
  return q;
}

QMatrix quaternion_vector_from_adjoint_column(const double* re, const double* im,
                                              std::size_t two_m) {
  const std::size_t m = two_m / 2;
  QMatrix v(m, 1);
  for (std::size_t r = 0; r < m; ++r) {
    // a = top half; b = -conj(bottom half)
    v.set(r, 0, {re[r], im[r], -re[m + r], im[m + r]});
  }
  return v;
}

}  // namespace clqa
