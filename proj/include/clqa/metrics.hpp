#pragma once

#include <cstdint>

#include "clqa/color_image.hpp"

namespace clqa {

struct QualityReport {
  double psnr = 0.0;  // dB; +infinity for identical images
  double ssim = 0.0;
};

/// Adds independent N(0, sigma^2) samples to the R, G and B channels. No
/// clipping; the real plane stays zero.
ColorImage add_awgn(const ColorImage& image, double sigma, std::uint64_t seed);

/// 10 log10(255^2 / MSE) with the MSE taken jointly over all 3 M N channel
/// samples. Identical images give +infinity.
double psnr(const ColorImage& ref, const ColorImage& test);

/// Single-scale SSIM with an 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
/// K2 = 0.03, L = 255, evaluated at every window position fully inside the
/// image, averaged per channel and then over the three channels.
double ssim(const ColorImage& ref, const ColorImage& test);

QualityReport quality(const ColorImage& ref, const ColorImage& test);

}  // namespace clqa
