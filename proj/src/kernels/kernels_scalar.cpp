#include "clqa/kernels.hpp"

#include <cstring>

namespace clqa::kernels {
namespace {

void qgemm(const double* const a[4], const double* const b[4], double* const c[4],
           std::size_t m, std::size_t k, std::size_t n) {
  for (int p = 0; p < 4; ++p) std::memset(c[p], 0, m * n * sizeof(double));
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
      for (std::size_t j = 0; j < n; ++j) {
        cw[j] += aw * bw[j] - ax * bx[j] - ay * by[j] - az * bz[j];
        cx[j] += aw * bx[j] + ax * bw[j] + ay * bz[j] - az * by[j];
        cy[j] += aw * by[j] - ax * bz[j] + ay * bw[j] + az * bx[j];
        cz[j] += aw * bz[j] + ax * by[j] - ay * bx[j] + az * bw[j];
      }
    }
  }
}

double sum_squares(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double patch_distance(const double* const* planes, std::size_t n_planes, std::size_t stride,
                      std::size_t off_a, std::size_t off_b, std::size_t w) {
  double s = 0.0;
  for (std::size_t p = 0; p < n_planes; ++p) {
    for (std::size_t r = 0; r < w; ++r) {
      const double* pa = planes[p] + off_a + r * stride;
      const double* pb = planes[p] + off_b + r * stride;
      for (std::size_t c = 0; c < w; ++c) {
        const double d = pa[c] - pb[c];
        s += d * d;
      }
    }
  }
  return s;
}

JacobiDots jacobi_dots(const double* ar, const double* ai, const double* br, const double* bi,
                       std::size_t n) {
  JacobiDots d{0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    d.alpha += ar[i] * ar[i] + ai[i] * ai[i];
    d.beta += br[i] * br[i] + bi[i] * bi[i];
    d.gamma_re += ar[i] * br[i] + ai[i] * bi[i];
    d.gamma_im += ar[i] * bi[i] - ai[i] * br[i];
  }
  return d;
}

void jacobi_rotate(double* ar, double* ai, double* br, double* bi, std::size_t n, double c,
                   double sr, double si) {
  // a' = c a - conj(s) b ; b' = s a + c b
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = ar[i], xi = ai[i], yr = br[i], yi = bi[i];
    ar[i] = c * xr - (sr * yr + si * yi);
    ai[i] = c * xi - (sr * yi - si * yr);
    br[i] = c * yr + (sr * xr - si * xi);
    bi[i] = c * yi + (sr * xi + si * xr);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", qgemm, sum_squares, patch_distance, jacobi_dots,
                                 jacobi_rotate};
  return table;
}

}  // namespace clqa::kernels
