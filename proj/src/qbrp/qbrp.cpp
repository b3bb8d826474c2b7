#include "clqa/qbrp.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "clqa/error.hpp"
#include "clqa/qsvd.hpp"
#include "clqa/seed.hpp"

namespace clqa {
namespace {

void check_rank(const QMatrix& y, std::size_t rank, const char* who) {
  const std::size_t limit = std::min(y.rows(), y.cols());
  if (rank < 1 || rank > limit) {
    throw RankOutOfRange(std::string(who) + ": rank " + std::to_string(rank) + " outside [1, " +
                         std::to_string(limit) + "] for a " + y.shape_string() + " matrix");
  }
}

std::uint64_t sketch_seed(std::uint64_t master, std::size_t iteration, std::size_t restart) {
  if (iteration == 0 && restart == 0) return master;
  return derive_seed(master, {iteration, restart});
}

}  // namespace

BrpSketch qbrp_sketch(const QMatrix& y, std::size_t rank, std::uint64_t seed) {
  check_rank(y, rank, "qbrp_sketch");
  const QMatrix a1 = random_gaussian_qmatrix(y.cols(), rank, seed);
  BrpSketch s;
  s.p1 = matmul(y, a1);
  s.a2 = s.p1;
  // Y^H p1 as (p1^H Y)^H: only the thin factors get transposed.
  s.p2 = conj_transpose(matmul(conj_transpose(s.p1), y));
  s.p1 = matmul(y, s.p2);
  s.effective_rank = rank;
  return s;
}

QMatrix sketch_core(const BrpSketch& sketch) {
  return matmul(conj_transpose(sketch.a2), sketch.p1);
}

QMatrix brp_reconstruct(const BrpSketch& sketch) {
  const QMatrix z = solve_linear(sketch_core(sketch), conj_transpose(sketch.p2));
  return matmul(sketch.p1, z);
}

QMatrix clqa_brp(const QMatrix& y, const BrpConfig& config, BrpTrace* trace) {
  check_rank(y, config.rank, "clqa_brp");
  if (config.iterations < 1) throw RankOutOfRange("clqa_brp: iterations must be >= 1");

  // A single sketch needs no residual unless the caller asks for one.
  const bool need_residual = config.iterations > 1 || trace != nullptr;
  BrpTrace local;
  QMatrix best;
  double best_residual = std::numeric_limits<double>::infinity();
  std::size_t rank = config.rank;
  std::size_t best_rank = 0;

  for (std::size_t t = 0; t < config.iterations && rank > 0; ++t) {
    std::size_t restart = 0;
    QMatrix x;
    while (rank > 0) {
      const BrpSketch sketch = qbrp_sketch(y, rank, sketch_seed(config.seed, t, restart));
      const std::size_t core_rank = quaternion_rank(sketch_core(sketch), config.rank_tol);
      if (core_rank < rank) {
        rank = core_rank;
        ++restart;
        continue;
      }
      try {
        x = brp_reconstruct(sketch);
        break;
      } catch (const SingularMatrix& e) {
        // Pivoting saw a smaller rank than the singular-value test; trust
        // the count of usable pivots.
        rank = std::min(rank - 1, e.pivot());
        ++restart;
      }
    }
    local.restarts += restart;
    local.iterations_run = t + 1;
    if (rank == 0) break;
    const double residual = need_residual ? frobenius_norm(y - x) : 0.0;
    if (residual < best_residual) {
      best_residual = residual;
      best_rank = rank;
      best = std::move(x);
    }
  }

  if (rank == 0 && best.empty()) {
    best = QMatrix(y.rows(), y.cols());
    best_residual = need_residual ? frobenius_norm(y) : 0.0;
  }
  local.final_rank = best_rank;
  local.residual = best_residual;
  if (trace != nullptr) *trace = local;
  return best;
}

}  // namespace clqa
