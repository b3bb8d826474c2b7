#include "clqa/nss_denoiser.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <thread>

#include "clqa/error.hpp"
#include "clqa/kernels.hpp"
#include "clqa/qbrp.hpp"
#include "clqa/seed.hpp"

namespace clqa {

ColorImage ColorImage::from_qmatrix(QMatrix q) {
  ColorImage img;
  auto w = q.plane(Component::W);
  std::fill(w.begin(), w.end(), 0.0);
  img.pixels_ = std::move(q);
  return img;
}

bool ColorImage::is_pure() const {
  const auto w = pixels_.plane(Component::W);
  return std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; });
}

void ColorImage::clip(double lo, double hi) {
  for (int ch = 0; ch < 3; ++ch) {
    for (double& v : channel(ch)) v = std::clamp(v, lo, hi);
  }
}

DenoiseConfig DenoiseConfig::defaults_for_sigma(double sigma) {
  DenoiseConfig c;
  c.sigma = sigma;
  if (sigma > 60.0) {
    c.patch = 9;
    c.group = 140;
    c.rank = 9;
  }
  return c;
}

void DenoiseConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid config: " + what); };
  if (!(sigma >= 0.0)) fail("sigma must be >= 0");
  if (patch < 2) fail("patch size must be >= 2");
  if (group < 1) fail("group size must be >= 1");
  if (rank < 1) fail("rank must be >= 1");
  if (group < rank) fail("group size must be >= rank");
  if (rank > patch * patch) fail("rank must not exceed patch * patch");
  if (search_window < patch) fail("search window must be >= patch size");
  if (stride < 1) fail("stride must be >= 1");
  if (!(delta >= 0.0 && delta < 1.0)) fail("delta must lie in [0, 1)");
  if (rounds < 1) fail("rounds must be >= 1");
  if (workers < 1) fail("workers must be >= 1");
}

namespace {

struct Range {
  std::size_t first;
  std::size_t last;  // inclusive
};

// Top-left offsets along one axis for patches inside the window centred on
// the reference patch.
Range candidate_range(std::size_t extent, std::size_t patch, std::size_t window,
                      std::size_t ref) {
  const auto start = static_cast<std::ptrdiff_t>(ref) - static_cast<std::ptrdiff_t>((window - patch) / 2);
  const auto stop = start + static_cast<std::ptrdiff_t>(window);
  const auto lo = static_cast<std::size_t>(std::max<std::ptrdiff_t>(start, 0));
  const auto hi = static_cast<std::size_t>(std::min<std::ptrdiff_t>(stop, static_cast<std::ptrdiff_t>(extent)));
  return {lo, hi - patch};
}

}  // namespace

std::vector<PatchPosition> window_candidates(std::size_t height, std::size_t width,
                                             PatchPosition ref, const DenoiseConfig& config) {
  const Range rows = candidate_range(height, config.patch, config.search_window, ref.row);
  const Range cols = candidate_range(width, config.patch, config.search_window, ref.col);
  std::vector<PatchPosition> out;
  out.reserve((rows.last - rows.first + 1) * (cols.last - cols.first + 1));
  for (std::size_t r = rows.first; r <= rows.last; ++r) {
    for (std::size_t c = cols.first; c <= cols.last; ++c) out.push_back({r, c});
  }
  return out;
}

PatchGroup extract_group(const ColorImage& image, PatchPosition ref, const DenoiseConfig& config) {
  const std::size_t w = config.patch;
  const std::size_t width = image.width();
  if (ref.row + w > image.height() || ref.col + w > width) {
    throw DimensionMismatch("extract_group: reference patch at (" + std::to_string(ref.row) +
                            ", " + std::to_string(ref.col) + ") leaves the image");
  }
  const std::vector<PatchPosition> cands = window_candidates(image.height(), width, ref, config);
  if (cands.size() < config.group) {
    throw WindowTooSmall("search window around (" + std::to_string(ref.row) + ", " +
                         std::to_string(ref.col) + ") holds " + std::to_string(cands.size()) +
                         " patches, fewer than the group size " + std::to_string(config.group));
  }

  const double* planes[3] = {image.channel(0).data(), image.channel(1).data(),
                             image.channel(2).data()};
  const auto& k = kernels::active();
  const std::size_t ref_off = ref.row * width + ref.col;

  struct Scored {
    double distance;
    std::size_t index;
  };
  std::vector<Scored> scored;
  scored.reserve(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (cands[i] == ref) continue;
    const std::size_t off = cands[i].row * width + cands[i].col;
    scored.push_back({k.patch_distance(planes, 3, width, ref_off, off, w), i});
  }
  const std::size_t others = config.group - 1;
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(others),
                    scored.end(), [](const Scored& a, const Scored& b) {
                      return a.distance < b.distance ||
                             (a.distance == b.distance && a.index < b.index);
                    });

  PatchGroup g;
  g.patch = w;
  g.coords.reserve(config.group);
  g.coords.push_back(ref);
  for (std::size_t i = 0; i < others; ++i) g.coords.push_back(cands[scored[i].index]);

  g.data = QMatrix(w * w, config.group);
  const std::size_t n = config.group;
  for (int ch = 0; ch < 3; ++ch) {
    auto dst = g.data.plane(static_cast<Component>(ch + 1));
    const double* src = planes[ch];
    for (std::size_t j = 0; j < n; ++j) {
      const PatchPosition p = g.coords[j];
      for (std::size_t dc = 0; dc < w; ++dc) {
        for (std::size_t dr = 0; dr < w; ++dr) {
          dst[(dc * w + dr) * n + j] = src[(p.row + dr) * width + p.col + dc];
        }
      }
    }
  }
  return g;
}

PatchGroup denoise_group(PatchGroup group, const DenoiseConfig& config, std::uint64_t seed) {
  BrpConfig brp;
  brp.rank = config.rank;
  brp.iterations = 1;
  brp.seed = seed;
  group.data = clqa_brp(group.data, brp);
  return group;
}

Aggregator::Aggregator(std::size_t height, std::size_t width)
    : height_(height), width_(width), sums_(3 * height * width, 0.0),
      counts_(height * width, 0.0) {}

void Aggregator::add(const PatchGroup& group) {
  const std::size_t w = group.patch;
  const std::size_t n = group.data.cols();
  const std::size_t plane = height_ * width_;
  for (std::size_t j = 0; j < group.coords.size(); ++j) {
    const PatchPosition p = group.coords[j];
    for (std::size_t dc = 0; dc < w; ++dc) {
      for (std::size_t dr = 0; dr < w; ++dr) {
        const std::size_t pix = (p.row + dr) * width_ + p.col + dc;
        const std::size_t src = (dc * w + dr) * n + j;
        for (int ch = 0; ch < 3; ++ch) {
          sums_[ch * plane + pix] += group.data.plane(static_cast<Component>(ch + 1))[src];
        }
        counts_[pix] += 1.0;
      }
    }
  }
}

ColorImage Aggregator::finish(const ColorImage& fallback) const {
  ColorImage out(height_, width_);
  const std::size_t plane = height_ * width_;
  for (int ch = 0; ch < 3; ++ch) {
    auto dst = out.channel(ch);
    const auto fb = fallback.channel(ch);
    for (std::size_t i = 0; i < plane; ++i) {
      dst[i] = counts_[i] > 0.0 ? sums_[ch * plane + i] / counts_[i] : fb[i];
    }
  }
  return out;
}

ColorImage aggregate(const std::vector<PatchGroup>& groups, const ColorImage& fallback) {
  Aggregator acc(fallback.height(), fallback.width());
  for (const auto& g : groups) acc.add(g);
  return acc.finish(fallback);
}

std::vector<std::size_t> reference_offsets(std::size_t extent, std::size_t patch,
                                           std::size_t stride) {
  std::vector<std::size_t> out;
  const std::size_t last = extent - patch;
  for (std::size_t o = 0; o <= last; o += stride) out.push_back(o);
  if (out.back() != last) out.push_back(last);
  return out;
}

std::uint64_t group_seed(std::uint64_t master, std::size_t round, std::size_t reference_index) {
  return derive_seed(master, {0x47524F5550ULL, round, reference_index});
}

namespace {

// Runs body(i) for i in [begin, end) on up to `workers` threads.
template <typename Body>
void parallel_for(std::size_t begin, std::size_t end, std::size_t workers, Body&& body) {
  const std::size_t count = end - begin;
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = begin; i < end; ++i) body(i);
    return;
  }
  const std::size_t threads = std::min(workers, count);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = begin + t; i < end; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

ColorImage denoise_image(const ColorImage& noisy, const DenoiseConfig& config,
                         const RoundObserver& observer) {
  config.validate();
  const std::size_t height = noisy.height();
  const std::size_t width = noisy.width();
  if (height < config.patch || width < config.patch) {
    throw ConfigError("image " + std::to_string(height) + "x" + std::to_string(width) +
                      " is smaller than the patch size " + std::to_string(config.patch));
  }
  const std::vector<std::size_t> ref_rows = reference_offsets(height, config.patch, config.stride);
  const std::vector<std::size_t> ref_cols = reference_offsets(width, config.patch, config.stride);
  std::vector<PatchPosition> refs;
  refs.reserve(ref_rows.size() * ref_cols.size());
  for (std::size_t r : ref_rows) {
    for (std::size_t c : ref_cols) refs.push_back({r, c});
  }
  for (const auto& ref : refs) {
    const std::size_t available = window_candidates(height, width, ref, config).size();
    if (available < config.group) {
      throw WindowTooSmall("search window around (" + std::to_string(ref.row) + ", " +
                           std::to_string(ref.col) + ") holds " + std::to_string(available) +
                           " patches, fewer than the group size " +
                           std::to_string(config.group));
    }
  }

  // Groups are produced in chunks and folded into the accumulator in
  // reference order, so the sums never depend on thread scheduling.
  const std::size_t chunk = 16 * config.workers;
  ColorImage estimate = noisy;
  for (std::size_t round = 0; round < config.rounds; ++round) {
    ColorImage working = estimate;
    if (round > 0) {
      for (int ch = 0; ch < 3; ++ch) {
        auto y = working.channel(ch);
        const auto z = noisy.channel(ch);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += config.delta * (z[i] - y[i]);
      }
    }
    Aggregator acc(height, width);
    std::vector<PatchGroup> batch(chunk);
    for (std::size_t start = 0; start < refs.size(); start += chunk) {
      const std::size_t stop = std::min(refs.size(), start + chunk);
      parallel_for(start, stop, config.workers, [&](std::size_t i) {
        batch[i - start] = denoise_group(extract_group(working, refs[i], config), config,
                                         group_seed(config.seed, round, i));
      });
      for (std::size_t i = start; i < stop; ++i) acc.add(batch[i - start]);
    }
    estimate = acc.finish(working);
    if (observer) observer(round + 1, estimate);
  }
  estimate.clip(0.0, 255.0);
  return estimate;
}

}  // namespace clqa
