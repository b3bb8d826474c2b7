#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "clqa/adjoint.hpp"
#include "clqa/qmatrix.hpp"

namespace clqa {

/// Thin quaternion SVD Q = U diag(S) V^H. U is M x p, V is N x p with
/// p = min(M, N); S is descending and nonnegative.
struct Qsvd {
  QMatrix u;
  std::vector<double> s;
  QMatrix v;
};

struct JacobiOptions {
  double rotation_tolerance = 1e-12;
  int max_sweeps = 60;
  double pairing_tolerance = 1e-8;
};

/// Singular values and right singular vectors of a complex matrix by
/// one-sided (Hestenes) Jacobi. `work` is overwritten with A V, whose column
/// norms are the singular values. Columns are left in the original order.
/// Throws ConvergenceError past `max_sweeps`.
struct JacobiResult {
  ComplexMatrix v;
  int sweeps = 0;
};
JacobiResult one_sided_jacobi(ComplexMatrix& work, const JacobiOptions& options = {});

/// Quaternion SVD via the complex adjoint. The 2p adjoint singular values
/// come in equal pairs; each pair collapses to one quaternion singular value.
/// Throws PairingError when a pair differs by more than
/// pairing_tolerance * S_1.
Qsvd qsvd(const QMatrix& q, const JacobiOptions& options = {});

/// Singular values only; cheaper than qsvd (no vector recovery).
std::vector<double> quaternion_singular_values(const QMatrix& q,
                                               const JacobiOptions& options = {});

/// Frobenius-optimal rank-r approximation U_r diag(S_r) V_r^H.
/// Throws RankOutOfRange unless 1 <= r <= min(M, N).
QMatrix truncated_qsvd(const QMatrix& q, std::size_t r, const JacobiOptions& options = {});

/// Number of singular values above `tol`. When `tol` is empty it defaults to
/// max(M, N) * S_1 * 2^-52 * 16.
std::size_t quaternion_rank(const QMatrix& q, std::optional<double> tol = std::nullopt);

}  // namespace clqa
