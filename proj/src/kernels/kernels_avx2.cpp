// Compiled with -mavx2 -mfma. Nothing in this translation unit may be called
// before avx2_table() has confirmed CPU support.
#include "clqa/kernels.hpp"

#if defined(CLQA_HAVE_AVX2)

#include <immintrin.h>

#include <cstring>

namespace clqa::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void qgemm(const double* const a[4], const double* const b[4], double* const c[4],
           std::size_t m, std::size_t k, std::size_t n) {
  for (int p = 0; p < 4; ++p) std::memset(c[p], 0, m * n * sizeof(double));
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < m; ++i) {
    double* cw = c[0] + i * n;
    double* cx = c[1] + i * n;
    double* cy = c[2] + i * n;
    double* cz = c[3] + i * n;
    for (std::size_t l = 0; l < k; ++l) {
      const double aw = a[0][i * k + l];
      const double ax = a[1][i * k + l];
      const double ay = a[2][i * k + l];
      const double az = a[3][i * k + l];
      const double* bw = b[0] + l * n;
      const double* bx = b[1] + l * n;
      const double* by = b[2] + l * n;
      const double* bz = b[3] + l * n;
      const __m256d vw = _mm256_set1_pd(aw);
      const __m256d vx = _mm256_set1_pd(ax);
      const __m256d vy = _mm256_set1_pd(ay);
      const __m256d vz = _mm256_set1_pd(az);
      std::size_t j = 0;
      for (; j < n4; j += 4) {
        const __m256d pw = _mm256_loadu_pd(bw + j);
        const __m256d px = _mm256_loadu_pd(bx + j);
        const __m256d py = _mm256_loadu_pd(by + j);
        const __m256d pz = _mm256_loadu_pd(bz + j);

        __m256d tw = _mm256_loadu_pd(cw + j);
        tw = _mm256_fmadd_pd(vw, pw, tw);
        tw = _mm256_fnmadd_pd(vx, px, tw);
        tw = _mm256_fnmadd_pd(vy, py, tw);
        tw = _mm256_fnmadd_pd(vz, pz, tw);
        _mm256_storeu_pd(cw + j, tw);

        __m256d tx = _mm256_loadu_pd(cx + j);
        tx = _mm256_fmadd_pd(vw, px, tx);
        tx = _mm256_fmadd_pd(vx, pw, tx);
        tx = _mm256_fmadd_pd(vy, pz, tx);
        tx = _mm256_fnmadd_pd(vz, py, tx);
        _mm256_storeu_pd(cx + j, tx);

        __m256d ty = _mm256_loadu_pd(cy + j);
        ty = _mm256_fmadd_pd(vw, py, ty);
        ty = _mm256_fnmadd_pd(vx, pz, ty);
        ty = _mm256_fmadd_pd(vy, pw, ty);
        ty = _mm256_fmadd_pd(vz, px, ty);
        _mm256_storeu_pd(cy + j, ty);

        __m256d tz = _mm256_loadu_pd(cz + j);
        tz = _mm256_fmadd_pd(vw, pz, tz);
        tz = _mm256_fmadd_pd(vx, py, tz);
        tz = _mm256_fnmadd_pd(vy, px, tz);
        tz = _mm256_fmadd_pd(vz, pw, tz);
        _mm256_storeu_pd(cz + j, tz);
      }
      for (; j < n; ++j) {
        cw[j] += aw * bw[j] - ax * bx[j] - ay * by[j] - az * bz[j];
        cx[j] += aw * bx[j] + ax * bw[j] + ay * bz[j] - az * by[j];
        cy[j] += aw * by[j] - ax * bz[j] + ay * bw[j] + az * bx[j];
        cz[j] += aw * bz[j] + ax * by[j] - ay * bx[j] + az * bw[j];
      }
    }
  }
}

double sum_squares(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(x + i);
    const __m256d v1 = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double patch_distance(const double* const* planes, std::size_t n_planes, std::size_t stride,
                      std::size_t off_a, std::size_t off_b, std::size_t w) {
  __m256d acc = _mm256_setzero_pd();
  double tail = 0.0;
  const std::size_t w4 = w & ~std::size_t{3};
  for (std::size_t p = 0; p < n_planes; ++p) {
    for (std::size_t r = 0; r < w; ++r) {
      const double* pa = planes[p] + off_a + r * stride;
      const double* pb = planes[p] + off_b + r * stride;
      std::size_t c = 0;
      for (; c < w4; c += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pa + c), _mm256_loadu_pd(pb + c));
        acc = _mm256_fmadd_pd(d, d, acc);
      }
      for (; c < w; ++c) {
        const double d = pa[c] - pb[c];
        tail += d * d;
      }
    }
  }
  return hsum(acc) + tail;
}

JacobiDots jacobi_dots(const double* ar, const double* ai, const double* br, const double* bi,
                       std::size_t n) {
  __m256d alpha = _mm256_setzero_pd();
  __m256d beta = _mm256_setzero_pd();
  __m256d gre = _mm256_setzero_pd();
  __m256d gim = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xr = _mm256_loadu_pd(ar + i);
    const __m256d xi = _mm256_loadu_pd(ai + i);
    const __m256d yr = _mm256_loadu_pd(br + i);
    const __m256d yi = _mm256_loadu_pd(bi + i);
    alpha = _mm256_fmadd_pd(xr, xr, alpha);
    alpha = _mm256_fmadd_pd(xi, xi, alpha);
    beta = _mm256_fmadd_pd(yr, yr, beta);
    beta = _mm256_fmadd_pd(yi, yi, beta);
    gre = _mm256_fmadd_pd(xr, yr, gre);
    gre = _mm256_fmadd_pd(xi, yi, gre);
    gim = _mm256_fmadd_pd(xr, yi, gim);
    gim = _mm256_fnmadd_pd(xi, yr, gim);
  }
  JacobiDots d{hsum(alpha), hsum(beta), hsum(gre), hsum(gim)};
  for (; i < n; ++i) {
    d.alpha += ar[i] * ar[i] + ai[i] * ai[i];
    d.beta += br[i] * br[i] + bi[i] * bi[i];
    d.gamma_re += ar[i] * br[i] + ai[i] * bi[i];
    d.gamma_im += ar[i] * bi[i] - ai[i] * br[i];
  }
  return d;
}

void jacobi_rotate(double* ar, double* ai, double* br, double* bi, std::size_t n, double c,
                   double sr, double si) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vsr = _mm256_set1_pd(sr);
  const __m256d vsi = _mm256_set1_pd(si);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xr = _mm256_loadu_pd(ar + i);
    const __m256d xi = _mm256_loadu_pd(ai + i);
    const __m256d yr = _mm256_loadu_pd(br + i);
    const __m256d yi = _mm256_loadu_pd(bi + i);
    // conj(s) * y
    const __m256d cyr = _mm256_fmadd_pd(vsr, yr, _mm256_mul_pd(vsi, yi));
    const __m256d cyi = _mm256_fmsub_pd(vsr, yi, _mm256_mul_pd(vsi, yr));
    // s * x
    const __m256d sxr = _mm256_fmsub_pd(vsr, xr, _mm256_mul_pd(vsi, xi));
    const __m256d sxi = _mm256_fmadd_pd(vsr, xi, _mm256_mul_pd(vsi, xr));
    _mm256_storeu_pd(ar + i, _mm256_fmsub_pd(vc, xr, cyr));
    _mm256_storeu_pd(ai + i, _mm256_fmsub_pd(vc, xi, cyi));
    _mm256_storeu_pd(br + i, _mm256_fmadd_pd(vc, yr, sxr));
    _mm256_storeu_pd(bi + i, _mm256_fmadd_pd(vc, yi, sxi));
  }
  for (; i < n; ++i) {
    const double xr = ar[i], xi = ai[i], yr = br[i], yi = bi[i];
    ar[i] = c * xr - (sr * yr + si * yi);
    ai[i] = c * xi - (sr * yi - si * yr);
    br[i] = c * yr + (sr * xr - si * xi);
    bi[i] = c * yi + (sr * xi + si * xr);
  }
}

}  // namespace

const KernelTable& avx2_table_impl() {
  static const KernelTable table{"avx2", qgemm, sum_squares, patch_distance, jacobi_dots,
                                 jacobi_rotate};
  return table;
}

}  // namespace clqa::kernels

#endif  // CLQA_HAVE_AVX2
