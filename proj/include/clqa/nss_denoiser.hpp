#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "clqa/color_image.hpp"
#include "clqa/qmatrix.hpp"

namespace clqa {

struct DenoiseConfig {
  double sigma = 50.0;
  std::size_t patch = 8;            // w
  std::size_t group = 120;          // n
  std::size_t rank = 7;             // r
  std::size_t rounds = 4;           // K
  std::size_t search_window = 30;   // side length in pixels
  std::size_t stride = 4;           // reference-patch step
  double delta = 0.1;               // iterative regularization weight
  std::uint64_t seed = 0;
  std::size_t workers = 1;

  /// Built-in parameters for a noise level: sigma <= 60 uses 8x8 patches,
  /// groups of 120 and rank 7; above that 9x9, 140 and rank 9.
  static DenoiseConfig defaults_for_sigma(double sigma);

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

struct PatchPosition {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const PatchPosition&, const PatchPosition&) = default;
};

/// w^2 x n matrix of vectorized similar patches; column 0 is the reference.
/// Patches are vectorized column-major (index = dc * w + dr).
struct PatchGroup {
  QMatrix data;
  std::vector<PatchPosition> coords;
  std::size_t patch = 0;
};

/// Candidate top-left corners inside the search window around `ref`,
/// clipped to the image, in row-major order.
std::vector<PatchPosition> window_candidates(std::size_t height, std::size_t width,
                                             PatchPosition ref, const DenoiseConfig& config);

/// The n candidates nearest to the reference patch by squared Frobenius
/// distance, reference first, ties broken by row-major candidate order.
/// Throws WindowTooSmall if the window holds fewer than n candidates.
PatchGroup extract_group(const ColorImage& image, PatchPosition ref, const DenoiseConfig& config);

/// Replaces the group's data by its rank-constrained approximation.
PatchGroup denoise_group(PatchGroup group, const DenoiseConfig& config, std::uint64_t group_seed);

/// Accumulates patch estimates per pixel (sum and count).
class Aggregator {
 public:
  Aggregator(std::size_t height, std::size_t width);
  void add(const PatchGroup& group);
  /// Sum / count per pixel; uncovered pixels take `fallback`'s value.
  ColorImage finish(const ColorImage& fallback) const;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<double> sums_;   // 3 planes
  std::vector<double> counts_;
};

ColorImage aggregate(const std::vector<PatchGroup>& groups, const ColorImage& fallback);

/// Reference positions on a stride grid that always includes the last valid
/// row and column.
std::vector<std::size_t> reference_offsets(std::size_t extent, std::size_t patch,
                                           std::size_t stride);

/// Seed for group `reference_index` of round `round` (both 0-based).
std::uint64_t group_seed(std::uint64_t master, std::size_t round, std::size_t reference_index);

/// Called after each round with the 1-based round index and its estimate.
using RoundObserver = std::function<void(std::size_t, const ColorImage&)>;

/// K rounds of: working image y = x + delta (noisy - x) (y = noisy in round
/// one), group extraction on y, per-group rank-constrained approximation,
/// aggregation into the new x. The result is clipped to [0, 255]. Output is
/// independent of the worker count.
ColorImage denoise_image(const ColorImage& noisy, const DenoiseConfig& config,
                         const RoundObserver& observer = {});

}  // namespace clqa
