#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "clqa/qmatrix.hpp"

namespace clqa {

/// Dense complex matrix, column-major, real and imaginary parts in separate
/// planes so each column is two contiguous arrays.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), re_(rows * cols, 0.0), im_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::complex<double> operator()(std::size_t r, std::size_t c) const {
    return {re_[c * rows_ + r], im_[c * rows_ + r]};
  }
  void set(std::size_t r, std::size_t c, std::complex<double> v) {
    re_[c * rows_ + r] = v.real();
    im_[c * rows_ + r] = v.imag();
  }

  double* col_re(std::size_t c) { return re_.data() + c * rows_; }
  double* col_im(std::size_t c) { return im_.data() + c * rows_; }
  const double* col_re(std::size_t c) const { return re_.data() + c * rows_; }
  const double* col_im(std::size_t c) const { return im_.data() + c * rows_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> re_;
  std::vector<double> im_;
};

ComplexMatrix complex_matmul(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_norm(const ComplexMatrix& a);

/// Complex adjoint chi(Q) = [[A, B], [-conj(B), conj(A)]] of Q = A + B j,
/// with A = Q0 + Q1 i and B = Q2 + Q3 i. A 2M x 2N matrix; chi is an algebra
/// homomorphism, chi(PQ) = chi(P) chi(Q) and chi(Q^H) = chi(Q)^H.
ComplexMatrix to_adjoint(const QMatrix& q);

/// Inverse of to_adjoint. Reads A and B from the top block row and throws
/// AsymmetryError when the bottom block row deviates from the implied
/// structure by more than `tolerance` relative to the matrix norm.
QMatrix from_adjoint(const ComplexMatrix& c, double tolerance = 1e-8);

/// Maps a complex 2M-vector [a; b] from the adjoint column space to the
/// quaternion vector a - conj(b) j, the inverse of taking the first column of
/// chi(q).
QMatrix quaternion_vector_from_adjoint_column(const double* re, const double* im,
                                              std::size_t two_m);

}  // namespace clqa
