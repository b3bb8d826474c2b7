#include "clqa/qsvd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "clqa/error.hpp"
#include "clqa/kernels.hpp"

namespace clqa {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using QVector = std::vector<Quaternion>;

QVector column_of(const QMatrix& m, std::size_t c) {
  QVector v(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) v[r] = m(r, c);
  return v;
}

double norm(const QVector& v) {
  double s = 0.0;
  for (const auto& q : v) s += squared_modulus(q);
  return std::sqrt(s);
}

// p^H q
Quaternion inner(const QVector& p, const QVector& q) {
  Quaternion acc;
  for (std::size_t i = 0; i < p.size(); ++i) acc += conjugate(p[i]) * q[i];
  return acc;
}

// Two passes of modified Gram-Schmidt against an orthonormal basis, with
// coefficients applied on the right (the scalar side of a right H-module).
void orthogonalize(QVector& v, const std::vector<QVector>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) {
      const Quaternion c = inner(b, v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b[i] * c;
    }
  }
}

void scale(QVector& v, double s) {
  for (auto& q : v) q *= s;
}

// Picks, among `candidates`, the vector with the largest component outside
// span(basis) and returns it normalized. Returns false if every candidate is
// numerically inside the span.
bool best_completion(const std::vector<QVector>& candidates, const std::vector<QVector>& basis,
                     QVector& out) {
  double best = 0.0;
  for (const auto& cand : candidates) {
    QVector v = cand;
    const double before = norm(v);
    if (before == 0.0) continue;
    orthogonalize(v, basis);
    const double after = norm(v) / before;
    if (after > best) {
      best = after;
      out = std::move(v);
    }
  }
  if (best < 1e-6) return false;
  scale(out, 1.0 / norm(out));
  return true;
}

// Orthonormal completion from standard basis vectors e_0, e_1, ... taken in
// order; falls back to the best remaining unit vector when the cursor runs
// out.
class UnitCompletion {
 public:
  explicit UnitCompletion(std::size_t dim) : dim_(dim) {}

  QVector next(const std::vector<QVector>& basis) {
    while (cursor_ < dim_) {
      QVector e(dim_);
      e[cursor_++] = Quaternion{1.0};
      orthogonalize(e, basis);
      const double ne = norm(e);
      if (ne > 0.1) {
        scale(e, 1.0 / ne);
        return e;
      }
    }
    std::vector<QVector> all;
    for (std::size_t k = 0; k < dim_; ++k) {
      QVector e(dim_);
      e[k] = Quaternion{1.0};
      all.push_back(std::move(e));
    }
    QVector out;
    best_completion(all, basis, out);
    return out;
  }

 private:
  std::size_t dim_;
  std::size_t cursor_ = 0;
};

struct SortedSpectrum {
  std::vector<std::size_t> order;   // complex column indices, descending norm
  std::vector<double> complex_sv;   // sorted complex singular values
  std::vector<double> quaternion_sv;
};

SortedSpectrum collapse_pairs(const ComplexMatrix& work, const JacobiOptions& options) {
  const std::size_t n2 = work.cols();
  const auto& k = kernels::active();
  std::vector<double> sv(n2);
  for (std::size_t j = 0; j < n2; ++j) {
    const double re = k.sum_squares(work.col_re(j), work.rows());
    const double im = k.sum_squares(work.col_im(j), work.rows());
    sv[j] = std::sqrt(re + im);
  }
  SortedSpectrum out;
  out.order.resize(n2);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return sv[a] > sv[b]; });
  out.complex_sv.resize(n2);
  for (std::size_t i = 0; i < n2; ++i) out.complex_sv[i] = sv[out.order[i]];

  const double top = n2 > 0 ? out.complex_sv[0] : 0.0;
  const double gap_limit = options.pairing_tolerance * top;
  out.quaternion_sv.resize(n2 / 2);
  for (std::size_t i = 0; i < n2 / 2; ++i) {
    const double a = out.complex_sv[2 * i];
    const double b = out.complex_sv[2 * i + 1];
    if (a - b > gap_limit) {
      throw PairingError("adjoint singular values " + std::to_string(a) + " and " +
                         std::to_string(b) + " at position " + std::to_string(i) +
                         " do not pair within tolerance");
    }
    out.quaternion_sv[i] = 0.5 * (a + b);
  }
  return out;
}

std::vector<double> singular_values_tall(const QMatrix& q, const JacobiOptions& options) {
  ComplexMatrix work = to_adjoint(q);
  one_sided_jacobi(work, options);
  return collapse_pairs(work, options).quaternion_sv;
}

Qsvd qsvd_tall(const QMatrix& q, const JacobiOptions& options) {
  const std::size_t m = q.rows();
  const std::size_t n = q.cols();
  ComplexMatrix work = to_adjoint(q);
  const JacobiResult jr = one_sided_jacobi(work, options);
  const SortedSpectrum spec = collapse_pairs(work, options);
  const double top = spec.quaternion_sv.empty() ? 0.0 : spec.quaternion_sv[0];
  const double cluster_tol = options.pairing_tolerance * top;

  const double zero_floor = static_cast<double>(std::max(m, n)) * kEps * top;

  // Right singular vectors: each quaternion singular value owns a
  // j-invariant pair of complex vectors. At the Jacobi stopping tolerance the
  // pairs are only approximately j-invariant, so every pick is projected
  // against all earlier vectors. Inside a cluster of equal values the first
  // pick may already lie in the span; then the whole cluster is searched.
  // Values at rounding level span the null space, where any orthonormal
  // completion is valid.
  std::vector<QVector> v_basis;
  v_basis.reserve(n);
  UnitCompletion v_fill(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double target = spec.quaternion_sv[i];
    QVector chosen;
    bool ok = false;
    if (target > zero_floor) {
      auto candidate = [&](std::size_t sorted_index) {
        const std::size_t col = spec.order[sorted_index];
        return column_of(
            quaternion_vector_from_adjoint_column(jr.v.col_re(col), jr.v.col_im(col), 2 * n), 0);
      };
      for (std::size_t pick : {2 * i, 2 * i + 1}) {
        QVector v = candidate(pick);
        orthogonalize(v, v_basis);
        const double nv = norm(v);
        if (nv > 0.5) {
          scale(v, 1.0 / nv);
          chosen = std::move(v);
          ok = true;
          break;
        }
      }
      if (!ok) {
        std::vector<QVector> candidates;
        for (std::size_t j = 0; j < 2 * n; ++j) {
          if (std::abs(spec.complex_sv[j] - target) <= cluster_tol) candidates.push_back(candidate(j));
        }
        ok = best_completion(candidates, v_basis, chosen);
      }
    }
    if (!ok) chosen = v_fill.next(v_basis);
    v_basis.push_back(std::move(chosen));
  }

  Qsvd out;
  out.s = spec.quaternion_sv;
  out.v = QMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) out.v.set(r, c, v_basis[c][r]);
  }

  // Left vectors from Q v_i / s_i; values at rounding level get an
  // orthonormal completion instead.
  const QMatrix qv = matmul(q, out.v);
  UnitCompletion u_fill(m);
  std::vector<QVector> u_basis;
  u_basis.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    QVector u = column_of(qv, i);
    bool ok = false;
    if (out.s[i] > zero_floor) {
      scale(u, 1.0 / out.s[i]);
      orthogonalize(u, u_basis);
      const double nu = norm(u);
      if (nu > 0.5) {
        scale(u, 1.0 / nu);
        ok = true;
      }
    }
    if (!ok) u = u_fill.next(u_basis);
    u_basis.push_back(std::move(u));
  }
  out.u = QMatrix(m, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < m; ++r) out.u.set(r, c, u_basis[c][r]);
  }
  return out;
}

}  // namespace

JacobiResult one_sided_jacobi(ComplexMatrix& work, const JacobiOptions& options) {
  const auto& k = kernels::active();
  const std::size_t rows = work.rows();
  const std::size_t cols = work.cols();
  JacobiResult result;
  result.v = ComplexMatrix(cols, cols);
  for (std::size_t j = 0; j < cols; ++j) result.v.col_re(j)[j] = 1.0;

  double total = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    total += k.sum_squares(work.col_re(j), rows) + k.sum_squares(work.col_im(j), rows);
  }
  // Columns below this energy are rounding residue of a rank-deficient
  // input; rotating them changes nothing measurable.
  const double skip = std::max(std::numeric_limits<double>::min(), 1e-30 * total);

  for (;;) {
    bool rotated = false;
    double off = 0.0;
    for (std::size_t i = 0; i + 1 < cols; ++i) {
      for (std::size_t j = i + 1; j < cols; ++j) {
        const kernels::JacobiDots d =
            k.jacobi_dots(work.col_re(i), work.col_im(i), work.col_re(j), work.col_im(j), rows);
        if (d.alpha <= skip || d.beta <= skip) continue;
        const double g = std::hypot(d.gamma_re, d.gamma_im);
        const double rel = g / std::sqrt(d.alpha * d.beta);
        off = std::max(off, rel);
        if (!(rel > options.rotation_tolerance)) continue;
        rotated = true;
        const double zeta = (d.beta - d.alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const double sr = s * d.gamma_re / g;
        const double si = s * d.gamma_im / g;
        k.jacobi_rotate(work.col_re(i), work.col_im(i), work.col_re(j), work.col_im(j), rows, c,
                        sr, si);
        k.jacobi_rotate(result.v.col_re(i), result.v.col_im(i), result.v.col_re(j),
                        result.v.col_im(j), cols, c, sr, si);
      }
    }
    ++result.sweeps;
    if (!rotated) break;
    if (result.sweeps >= options.max_sweeps) throw ConvergenceError(result.sweeps, off);
  }
  return result;
}

Qsvd qsvd(const QMatrix& q, const JacobiOptions& options) {
  if (q.rows() >= q.cols()) return qsvd_tall(q, options);
  Qsvd t = qsvd_tall(conj_transpose(q), options);
  std::swap(t.u, t.v);
  return t;
}

std::vector<double> quaternion_singular_values(const QMatrix& q, const JacobiOptions& options) {
  if (q.rows() >= q.cols()) return singular_values_tall(q, options);
  return singular_values_tall(conj_transpose(q), options);
}

QMatrix truncated_qsvd(const QMatrix& q, std::size_t r, const JacobiOptions& options) {
  const std::size_t p = std::min(q.rows(), q.cols());
  if (r < 1 || r > p) {
    throw RankOutOfRange("truncated_qsvd: rank " + std::to_string(r) + " outside [1, " +
                         std::to_string(p) + "]");
  }
  const Qsvd f = qsvd(q, options);
  QMatrix us = f.u.columns(0, r);
  for (std::size_t c = 0; c < r; ++c) {
    for (std::size_t row = 0; row < us.rows(); ++row) us.set(row, c, us(row, c) * f.s[c]);
  }
  return matmul(us, conj_transpose(f.v.columns(0, r)));
}

std::size_t quaternion_rank(const QMatrix& q, std::optional<double> tol) {
  const std::vector<double> s = quaternion_singular_values(q);
  if (s.empty()) return 0;
  const double threshold =
      tol.value_or(static_cast<double>(std::max(q.rows(), q.cols())) * s[0] * kEps * 16.0);
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [&](double v) { return v > threshold; }));
}

}  // namespace clqa
