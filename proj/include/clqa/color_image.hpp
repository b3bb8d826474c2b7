#pragma once

#include <cstddef>
#include <span>

#include "clqa/qmatrix.hpp"

namespace clqa {

/// RGB image as a pure quaternion matrix: pixel (r, c) is 0 + R i + G j + B k.
/// The real plane is identically zero; channel values are unclipped doubles.
class ColorImage {
 public:
  ColorImage() = default;
  ColorImage(std::size_t height, std::size_t width) : pixels_(height, width) {}

  /// Adopts a quaternion matrix, zeroing its real plane.
  static ColorImage from_qmatrix(QMatrix q);

  std::size_t height() const noexcept { return pixels_.rows(); }
  std::size_t width() const noexcept { return pixels_.cols(); }
  bool empty() const noexcept { return pixels_.empty(); }

  /// channel 0 = R (i), 1 = G (j), 2 = B (k); row-major.
  std::span<double> channel(int c) { return pixels_.plane(static_cast<Component>(c + 1)); }
  std::span<const double> channel(int c) const {
    return pixels_.plane(static_cast<Component>(c + 1));
  }

  double at(std::size_t r, std::size_t c, int ch) const { return channel(ch)[r * width() + c]; }
  void set(std::size_t r, std::size_t c, int ch, double v) { channel(ch)[r * width() + c] = v; }

  const QMatrix& quaternions() const noexcept { return pixels_; }

  bool is_pure() const;
  void clip(double lo = 0.0, double hi = 255.0);

  friend bool operator==(const ColorImage&, const ColorImage&) = default;

 private:
  QMatrix pixels_;
};

}  // namespace clqa
