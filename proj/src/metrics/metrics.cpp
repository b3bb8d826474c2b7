#include "clqa/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "clqa/error.hpp"

namespace clqa {
namespace {

constexpr double kPeak = 255.0;
constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;

void require_same_size(const ColorImage& a, const ColorImage& b, const char* who) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw DimensionMismatch(std::string(who) + ": image sizes " + std::to_string(a.height()) +
                            "x" + std::to_string(a.width()) + " and " +
                            std::to_string(b.height()) + "x" + std::to_string(b.width()) +
                            " differ");
  }
}

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> taps{};
  double total = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    taps[i] = std::exp(-d * d / (2.0 * kWindowSigma * kWindowSigma));
    total += taps[i];
  }
  for (double& t : taps) t /= total;
  return taps;
}

// Separable "valid" filtering: output is (h - 10) x (w - 10).
std::vector<double> filter_valid(const std::vector<double>& in, std::size_t h, std::size_t w,
                                 const std::array<double, kWindow>& taps) {
  const std::size_t ow = w - kWindow + 1;
  const std::size_t oh = h - kWindow + 1;
  std::vector<double> rows(h * ow);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < ow; ++c) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += taps[k] * in[r * w + c + k];
      rows[r * ow + c] = s;
    }
  }
  std::vector<double> out(oh * ow);
  for (std::size_t r = 0; r < oh; ++r) {
    for (std::size_t c = 0; c < ow; ++c) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += taps[k] * rows[(r + k) * ow + c];
      out[r * ow + c] = s;
    }
  }
  return out;
}

double ssim_channel(std::span<const double> x, std::span<const double> y, std::size_t h,
                    std::size_t w) {
  static const auto taps = gaussian_taps();
  constexpr double c1 = (0.01 * kPeak) * (0.01 * kPeak);
  constexpr double c2 = (0.03 * kPeak) * (0.03 * kPeak);
  const std::size_t n = h * w;
  std::vector<double> xv(x.begin(), x.end()), yv(y.begin(), y.end());
  std::vector<double> xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = filter_valid(xv, h, w, taps);
  const auto my = filter_valid(yv, h, w, taps);
  const auto sxx = filter_valid(xx, h, w, taps);
  const auto syy = filter_valid(yy, h, w, taps);
  const auto sxy = filter_valid(xy, h, w, taps);
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i];
    const double vy = syy[i] - my[i] * my[i];
    const double cov = sxy[i] - mx[i] * my[i];
    const double num = (2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2);
    const double den = (mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2);
    total += num / den;
  }
  return total / static_cast<double>(mx.size());
}

}  // namespace

ColorImage add_awgn(const ColorImage& image, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ConfigError("add_awgn: sigma must be >= 0");
  ColorImage out = image;
  if (sigma == 0.0) return out;
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (int ch = 0; ch < 3; ++ch) {
    for (double& v : out.channel(ch)) v += normal(gen);
  }
  return out;
}

double psnr(const ColorImage& ref, const ColorImage& test) {
  require_same_size(ref, test, "psnr");
  double sse = 0.0;
  for (int ch = 0; ch < 3; ++ch) {
    const auto a = ref.channel(ch);
    const auto b = test.channel(ch);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      sse += d * d;
    }
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / (3.0 * static_cast<double>(ref.height() * ref.width()));
  return 10.0 * std::log10(kPeak * kPeak / mse);
}

double ssim(const ColorImage& ref, const ColorImage& test) {
  require_same_size(ref, test, "ssim");
  if (ref.height() < kWindow || ref.width() < kWindow) {
    throw TooSmall("ssim: images must be at least 11x11");
  }
  double total = 0.0;
  for (int ch = 0; ch < 3; ++ch) {
    total += ssim_channel(ref.channel(ch), test.channel(ch), ref.height(), ref.width());
  }
  return total / 3.0;
}

QualityReport quality(const ColorImage& ref, const ColorImage& test) {
  return {psnr(ref, test), ssim(ref, test)};
}

}  // namespace clqa
