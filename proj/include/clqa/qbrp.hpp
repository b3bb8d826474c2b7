#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "clqa/qmatrix.hpp"

namespace clqa {

struct BrpConfig {
  std::size_t rank = 1;        // target rank r
  std::size_t iterations = 1;  // T; one pass is enough for denoising
  std::uint64_t seed = 0;
  std::optional<double> rank_tol;  // forwarded to quaternion_rank; automatic when empty
};

/// Bilateral random projections of Y (M x N).
///   p1 = Y A1 (after the power step: Y Y^H Y A1), M x r
///   p2 = Y^H Y A1, N x r
///   a2 = Y A1, the pre-power copy of p1, M x r
/// A1 (N x r, Gaussian) is consumed during construction.
struct BrpSketch {
  QMatrix p1;
  QMatrix p2;
  QMatrix a2;
  std::size_t effective_rank = 0;
};

BrpSketch qbrp_sketch(const QMatrix& y, std::size_t rank, std::uint64_t seed);

/// The r x r matrix a2^H p1 whose inverse sits between the two sketches.
QMatrix sketch_core(const BrpSketch& sketch);

/// p1 (a2^H p1)^{-1} p2^H, evaluated with solve_linear rather than an
/// explicit inverse. Throws SingularMatrix when the core is singular.
QMatrix brp_reconstruct(const BrpSketch& sketch);

/// Diagnostics from one clqa_brp call.
struct BrpTrace {
  std::size_t final_rank = 0;
  std::size_t restarts = 0;        // rank-deficiency regenerations
  std::size_t iterations_run = 0;
  double residual = 0.0;           // ||Y - X||_F of the returned iterate
};

/// Rank-constrained approximation min ||Y - X||_F s.t. rank(X) <= r using
/// bilateral random projections.
///
/// Each iteration sketches Y. When the numerical rank of a2^H p1 is below the
/// current r, r drops to that rank and A1 is redrawn from a seed derived from
/// (seed, iteration, restart) before sketching again. A numerically zero Y
/// collapses r to 0 and yields the zero matrix. With T > 1 every iteration
/// draws a fresh A1 and the iterate with the smallest residual is kept.
///
/// Throws RankOutOfRange unless 1 <= r <= min(M, N) and T >= 1.
QMatrix clqa_brp(const QMatrix& y, const BrpConfig& config, BrpTrace* trace = nullptr);

}  // namespace clqa
