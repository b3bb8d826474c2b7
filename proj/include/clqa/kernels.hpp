#pragma once

// Data-parallel inner loops. Every kernel has a portable scalar reference
// implementation and, on x86-64, an AVX2+FMA variant chosen at runtime. The
// two are equivalence-tested against each other.

#include <cstddef>
#include <string_view>

namespace clqa::kernels {

struct JacobiDots {
  double alpha;    // |a|^2
  double beta;     // |b|^2
  double gamma_re; // Re(a^H b)
  double gamma_im; // Im(a^H b)
};

struct KernelTable {
  std::string_view name;

  // C = A * B for quaternion matrices in four-plane row-major layout.
  // A is m x k, B is k x n, C is m x n; C is overwritten.
  void (*qgemm)(const double* const a[4], const double* const b[4], double* const c[4],
                std::size_t m, std::size_t k, std::size_t n);

  // Sum of squares of x[0..n).
  double (*sum_squares)(const double* x, std::size_t n);

  // Squared distance between two w x w patches summed over `planes` planes
  // of a row-major image with row stride `stride`. `off_a`/`off_b` are the
  // element offsets of the patch top-left corners.
  double (*patch_distance)(const double* const* planes, std::size_t n_planes,
                           std::size_t stride, std::size_t off_a, std::size_t off_b,
                           std::size_t w);

  // Norms and inner product of two complex columns in split re/im storage.
  JacobiDots (*jacobi_dots)(const double* ar, const double* ai, const double* br,
                            const double* bi, std::size_t n);

  // [a b] <- [a b] * [[c, s e^{i phi}], [-s e^{-i phi}, c]] with
  // (sr, si) = s * e^{i phi}.
  void (*jacobi_rotate)(double* ar, double* ai, double* br, double* bi, std::size_t n,
                        double c, double sr, double si);
};

const KernelTable& scalar_table();

/// AVX2+FMA table, or nullptr when the build or the CPU lacks support.
const KernelTable* avx2_table();

/// Table used by the library. Defaults to the best supported variant; the
/// environment variable CLQA_KERNELS=scalar forces the reference kernels.
const KernelTable& active();

}  // namespace clqa::kernels
