#include "clqa/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "clqa/error.hpp"
#include "clqa/io.hpp"
#include "clqa/metrics.hpp"
#include "clqa/nss_denoiser.hpp"
#include "clqa/qbrp.hpp"
#include "clqa/qsvd.hpp"
#include "clqa/seed.hpp"

#ifndef CLQA_VERSION
#define CLQA_VERSION "0.0.0"
#endif

namespace clqa::cli {
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string format_db(double db) { return std::isinf(db) ? "inf" : fmt("%.4f", db); }

fs::path sibling(const fs::path& p, const char* suffix) {
  fs::path out = p;
  out += suffix;
  return out;
}

// ---- settings: flags layered over a config file -------------------------

// Every option is captured as text so that flag values and config-file
// values go through the same parser. A flag given on the command line wins
// over the same key in --config.
class Settings {
 public:
  explicit Settings(CLI::App* app) : app_(app) {
    app_->add_option("--config", config_path_, "key = value file, e.g. a previous run's manifest");
  }

  void option(const std::string& key, const std::string& help, bool required = false) {
    auto* opt = app_->add_option("--" + key, raw_[key], help);
    options_[key] = opt;
    if (required) required_.push_back(key);
  }

  void flag(const std::string& key, const std::string& help) {
    auto* opt = app_->add_flag("--" + key, help);
    options_[key] = opt;
    flags_.push_back(key);
  }

  // Merges the config file; call after parsing.
  void resolve(const std::string& command) {
    for (const auto& key : flags_) {
      if (options_[key]->count() > 0) raw_[key] = "true";
    }
    if (!config_path_.empty()) {
      const io::Manifest m = io::Manifest::load(config_path_);
      if (m.has("command") && m.get("command") != command) {
        throw ConfigError(config_path_ + " is a '" + m.get("command") + "' manifest, not '" +
                          command + "'");
      }
      for (const auto& [key, value] : m.entries()) {
        auto it = options_.find(key);
        if (it != options_.end() && it->second->count() == 0) raw_[key] = value;
      }
    }
    for (const auto& key : required_) {
      if (!has(key)) throw ConfigError("--" + key + " is required");
    }
  }

  bool has(const std::string& key) const {
    auto opt = options_.find(key);
    if (opt == options_.end()) return false;
    auto it = raw_.find(key);
    return it != raw_.end() && !it->second.empty();
  }

  std::string text(const std::string& key) const {
    if (!has(key)) throw ConfigError("--" + key + " is required");
    return raw_.at(key);
  }

  template <typename T>
  T number(const std::string& key) const {
    const std::string s = text(key);
    T value{};
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || end != s.data() + s.size()) {
      throw ConfigError("--" + key + ": '" + s + "' is not a valid number");
    }
    return value;
  }

  template <typename T>
  T number_or(const std::string& key, T fallback) const {
    return has(key) ? number<T>(key) : fallback;
  }

  bool boolean(const std::string& key) const {
    if (!has(key)) return false;
    const std::string s = text(key);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError("--" + key + ": '" + s + "' is not a boolean");
  }

 private:
  CLI::App* app_;
  std::string config_path_;
  std::map<std::string, std::string> raw_;
  std::map<std::string, CLI::Option*> options_;
  std::vector<std::string> required_;
  std::vector<std::string> flags_;
};

// Malformed files surface as I/O failures that name the file.
template <typename F>
auto reading(const fs::path& path, F&& f) {
  try {
    return f(path);
  } catch (const FormatError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

io::Manifest start_manifest(const std::string& command) {
  io::Manifest m;
  m.set("command", command);
  m.set("version", CLQA_VERSION);
  return m;
}

// ---- add-noise ------------------------------------------------------------

struct AddNoise {
  explicit AddNoise(CLI::App* app) : settings(app) {
    settings.option("input", "clean 8-bit RGB PNG", true);
    settings.option("output", "noisy PNG; <output>.qimgf keeps unclipped values", true);
    settings.option("sigma", "noise standard deviation on the 0..255 scale", true);
    settings.option("seed", "random seed");
  }

  int run(std::ostream& out) {
    settings.resolve("add-noise");
    const fs::path input = settings.text("input");
    const fs::path output = settings.text("output");
    const double sigma = settings.number<double>("sigma");
    const auto seed = settings.number_or<std::uint64_t>("seed", 0);
    if (!(sigma >= 0.0)) throw ConfigError("--sigma must be >= 0");

    io::Manifest m = start_manifest("add-noise");
    m.set("input", input.string());
    m.set("output", output.string());
    m.set_number("sigma", sigma);
    m.set_number("seed", static_cast<unsigned long long>(seed));

    auto t = Clock::now();
    const ColorImage clean = reading(input, [](const fs::path& p) { return io::read_png(p); });
    m.set_number("time.read_seconds", seconds_since(t));

    t = Clock::now();
    const ColorImage noisy = add_awgn(clean, sigma, seed);
    m.set_number("time.noise_seconds", seconds_since(t));

    t = Clock::now();
    if (sigma == 0.0) {
      // No noise: keep the input's exact bytes.
      io::write_file(output, io::read_file(input));
    } else {
      io::write_png(output, noisy);
    }
    io::write_qimgf(sibling(output, ".qimgf"), noisy);
    m.set_number("time.write_seconds", seconds_since(t));
    m.save(sibling(output, ".manifest"));

    ColorImage stored = noisy;
    stored.clip();
    for (int ch = 0; ch < 3; ++ch) {
      for (double& v : stored.channel(ch)) v = std::nearbyint(v);
    }
    out << "PSNR=" << format_db(psnr(clean, noisy)) << " PSNR_8BIT=" << format_db(psnr(clean, stored))
        << '\n';
    return kSuccess;
  }

  Settings settings;
};

// ---- denoise ---------------------------------------------------------------

struct Denoise {
  explicit Denoise(CLI::App* app) : settings(app) {
    settings.option("input", "noisy image (PNG or QIMGF1 float sidecar)", true);
    settings.option("output", "denoised 8-bit PNG", true);
    settings.option("sigma", "noise level; selects the default parameters", true);
    settings.option("patch", "patch side w");
    settings.option("group", "similar patches per group n");
    settings.option("rank", "target rank r");
    settings.option("rounds", "denoising rounds K");
    settings.option("window", "search window side in pixels");
    settings.option("stride", "reference patch step");
    settings.option("delta", "iterative regularization weight");
    settings.option("seed", "random seed");
    settings.option("workers", "worker threads");
    settings.option("reference", "clean image; prints PSNR and SSIM of the output");
  }

  DenoiseConfig config() const {
    DenoiseConfig c = DenoiseConfig::defaults_for_sigma(settings.number<double>("sigma"));
    c.patch = settings.number_or("patch", c.patch);
    c.group = settings.number_or("group", c.group);
    c.rank = settings.number_or("rank", c.rank);
    c.rounds = settings.number_or("rounds", c.rounds);
    c.search_window = settings.number_or("window", c.search_window);
    c.stride = settings.number_or("stride", c.stride);
    c.delta = settings.number_or("delta", c.delta);
    c.seed = settings.number_or("seed", c.seed);
    c.workers = settings.number_or("workers", c.workers);
    return c;
  }

  int run(std::ostream& out) {
    settings.resolve("denoise");
    const fs::path input = settings.text("input");
    const fs::path output = settings.text("output");
    const DenoiseConfig c = config();
    c.validate();

    io::Manifest m = start_manifest("denoise");
    m.set("input", input.string());
    m.set("output", output.string());
    m.set_number("sigma", c.sigma);
    m.set_number("patch", static_cast<unsigned long long>(c.patch));
    m.set_number("group", static_cast<unsigned long long>(c.group));
    m.set_number("rank", static_cast<unsigned long long>(c.rank));
    m.set_number("rounds", static_cast<unsigned long long>(c.rounds));
    m.set_number("window", static_cast<unsigned long long>(c.search_window));
    m.set_number("stride", static_cast<unsigned long long>(c.stride));
    m.set_number("delta", c.delta);
    m.set_number("seed", static_cast<unsigned long long>(c.seed));
    m.set_number("workers", static_cast<unsigned long long>(c.workers));

    auto t = Clock::now();
    const ColorImage noisy = reading(input, [](const fs::path& p) { return io::read_image(p); });
    std::optional<ColorImage> reference;
    if (settings.has("reference")) {
      const fs::path ref = settings.text("reference");
      m.set("reference", ref.string());
      reference = reading(ref, [](const fs::path& p) { return io::read_image(p); });
      if (reference->height() != noisy.height() || reference->width() != noisy.width()) {
        throw DimensionMismatch("reference " + ref.string() + " does not match the input size");
      }
    }
    m.set_number("time.read_seconds", seconds_since(t));

    t = Clock::now();
    auto round_start = t;
    std::vector<double> round_times;
    const ColorImage result = denoise_image(noisy, c, [&](std::size_t, const ColorImage&) {
      round_times.push_back(seconds_since(round_start));
      round_start = Clock::now();
    });
    m.set_number("time.denoise_seconds", seconds_since(t));
    for (std::size_t k = 0; k < round_times.size(); ++k) {
      m.set_number("time.round" + std::to_string(k + 1) + "_seconds", round_times[k]);
    }

    t = Clock::now();
    io::write_png(output, result);
    m.set_number("time.write_seconds", seconds_since(t));

    if (reference) {
      t = Clock::now();
      const ColorImage stored = io::read_png(output);
      const QualityReport q = quality(*reference, stored);
      m.set_number("time.metrics_seconds", seconds_since(t));
      m.set("metrics.psnr", format_db(q.psnr));
      m.set("metrics.ssim", fmt("%.6f", q.ssim));
      out << "PSNR=" << format_db(q.psnr) << " SSIM=" << fmt("%.6f", q.ssim) << '\n';
    }
    m.save(sibling(output, ".manifest"));
    return kSuccess;
  }

  Settings settings;
};

// ---- approx ----------------------------------------------------------------

struct Approx {
  explicit Approx(CLI::App* app) : settings(app) {
    settings.option("input", "QMAT1 matrix", true);
    settings.option("output", "QMAT1 file for the rank-r approximation", true);
    settings.option("rank", "target rank r", true);
    settings.option("seed", "random seed");
    settings.option("iterations", "independent sketches; the best one is kept");
    settings.flag("oracle", "also compute the truncated QSVD");
    settings.option("oracle-output", "QMAT1 file for the truncated QSVD (default <output>.oracle.qmat)");
  }

  int run(std::ostream& out) {
    settings.resolve("approx");
    const fs::path input = settings.text("input");
    const fs::path output = settings.text("output");
    BrpConfig brp;
    brp.rank = settings.number<std::size_t>("rank");
    brp.seed = settings.number_or<std::uint64_t>("seed", 0);
    brp.iterations = settings.number_or<std::size_t>("iterations", 1);
    const bool oracle = settings.boolean("oracle");
    const fs::path oracle_output = settings.has("oracle-output")
                                       ? fs::path(settings.text("oracle-output"))
                                       : sibling(output, ".oracle.qmat");

    io::Manifest m = start_manifest("approx");
    m.set("input", input.string());
    m.set("output", output.string());
    m.set_number("rank", static_cast<unsigned long long>(brp.rank));
    m.set_number("seed", static_cast<unsigned long long>(brp.seed));
    m.set_number("iterations", static_cast<unsigned long long>(brp.iterations));
    m.set("oracle", oracle ? "true" : "false");
    if (oracle) m.set("oracle-output", oracle_output.string());

    auto t = Clock::now();
    const QMatrix y = reading(input, [](const fs::path& p) { return io::read_qmat(p); });
    m.set_number("time.read_seconds", seconds_since(t));
    const std::size_t limit = std::min(y.rows(), y.cols());
    if (brp.rank < 1 || brp.rank > limit) {
      throw RankOutOfRange("--rank " + std::to_string(brp.rank) + " outside [1, " +
                           std::to_string(limit) + "] for a " + y.shape_string() + " matrix");
    }
    if (brp.iterations < 1) throw ConfigError("--iterations must be >= 1");
    const double norm = frobenius_norm(y);
    auto report = [&](const char* name, const QMatrix& x) {
      const double err = frobenius_norm(y - x);
      const double rel = norm > 0.0 ? err / norm : 0.0;
      out << name << "_error=" << fmt("%.9e", err) << ' ' << name
          << "_relative=" << fmt("%.9e", rel) << '\n';
    };

    t = Clock::now();
    const QMatrix x = clqa_brp(y, brp);
    m.set_number("time.brp_seconds", seconds_since(t));
    io::write_qmat(output, x);
    report("brp", x);

    if (oracle) {
      t = Clock::now();
      const QMatrix xo = truncated_qsvd(y, brp.rank);
      m.set_number("time.oracle_seconds", seconds_since(t));
      io::write_qmat(oracle_output, xo);
      report("oracle", xo);
    }
    m.save(sibling(output, ".manifest"));
    return kSuccess;
  }

  Settings settings;
};

// ---- bench -----------------------------------------------------------------

struct Bench {
  explicit Bench(CLI::App* app) : settings(app) {
    settings.option("sizes", "comma separated sizes, N for N x N or MxN", true);
    settings.option("rank", "target rank r");
    settings.option("repeats", "timed runs per method and size");
    settings.option("oracle-repeats", "timed QSVD runs (default: --repeats)");
    settings.flag("no-oracle", "time clqa_brp only");
    settings.option("seed", "random seed");
    settings.option("output", "CSV path (default: standard output)");
  }

  int run(std::ostream& out) {
    settings.resolve("bench");
    BenchOptions o;
    o.sizes = parse_sizes(settings.text("sizes"));
    o.rank = settings.number_or<std::size_t>("rank", 15);
    o.repeats = settings.number_or<std::size_t>("repeats", 3);
    o.oracle_repeats = settings.number_or<std::size_t>("oracle-repeats", 0);
    o.run_oracle = !settings.boolean("no-oracle");
    o.seed = settings.number_or<std::uint64_t>("seed", 0);
    if (o.repeats < 1) throw ConfigError("--repeats must be >= 1");
    for (const auto& s : o.sizes) {
      if (o.rank < 1 || o.rank > std::min(s.rows, s.cols)) {
        throw RankOutOfRange("--rank " + std::to_string(o.rank) + " does not fit size " +
                             std::to_string(s.rows) + "x" + std::to_string(s.cols));
      }
    }

    std::ostringstream csv;
    csv << kBenchHeader << '\n';
    for (const auto& row : run_bench(o)) csv << format_bench_row(row) << '\n';
    if (settings.has("output")) {
      const fs::path path = settings.text("output");
      const std::string text = csv.str();
      io::write_file(path, std::vector<unsigned char>(text.begin(), text.end()));
      io::Manifest m = start_manifest("bench");
      m.set("sizes", settings.text("sizes"));
      m.set_number("rank", static_cast<unsigned long long>(o.rank));
      m.set_number("repeats", static_cast<unsigned long long>(o.repeats));
      if (o.oracle_repeats > 0) {
        m.set_number("oracle-repeats", static_cast<unsigned long long>(o.oracle_repeats));
      }
      m.set("no-oracle", o.run_oracle ? "false" : "true");
      m.set_number("seed", static_cast<unsigned long long>(o.seed));
      m.set("output", path.string());
      m.save(sibling(path, ".manifest"));
    } else {
      out << csv.str();
    }
    return kSuccess;
  }

  Settings settings;
};

// ---- metrics ---------------------------------------------------------------

struct Metrics {
  explicit Metrics(CLI::App* app) {
    app->add_option("reference", reference, "reference image")->required();
    app->add_option("test", test, "image to score")->required();
  }

  int run(std::ostream& out) {
    const ColorImage a = reading(reference, [](const fs::path& p) { return io::read_image(p); });
    const ColorImage b = reading(test, [](const fs::path& p) { return io::read_image(p); });
    const QualityReport q = quality(a, b);
    out << "PSNR=" << format_db(q.psnr) << " SSIM=" << fmt("%.6f", q.ssim) << '\n';
    return kSuccess;
  }

  std::string reference;
  std::string test;
};

int exit_code_for(const Error& e) {
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const FormatError*>(&e)) return kIoFailure;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const RankOutOfRange*>(&e) ||
      dynamic_cast<const WindowTooSmall*>(&e) || dynamic_cast<const DimensionMismatch*>(&e) ||
      dynamic_cast<const TooSmall*>(&e)) {
    return kValidationFailure;
  }
  return kComputeFailure;
}

}  // namespace

std::vector<BenchSize> parse_sizes(const std::string& text) {
  std::vector<BenchSize> sizes;
  auto parse_dim = [&](std::string_view s) {
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || v == 0) {
      throw ConfigError("bad size '" + std::string(s) + "' in '" + text + "'");
    }
    return v;
  };
  std::string_view rest = text;
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const std::size_t x = item.find('x');
    if (x == std::string_view::npos) {
      const std::size_t n = parse_dim(item);
      sizes.push_back({n, n});
    } else {
      sizes.push_back({parse_dim(item.substr(0, x)), parse_dim(item.substr(x + 1))});
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (sizes.empty()) throw ConfigError("no sizes given");
  return sizes;
}

QMatrix synthetic_low_rank(std::size_t rows, std::size_t cols, std::size_t rank,
                           double noise_fraction, std::uint64_t seed) {
  const QMatrix a = random_gaussian_qmatrix(rows, rank, derive_seed(seed, {1}));
  const QMatrix b = random_gaussian_qmatrix(rank, cols, derive_seed(seed, {2}));
  QMatrix y = matmul(a, b);
  if (noise_fraction > 0.0) {
    QMatrix e = random_gaussian_qmatrix(rows, cols, derive_seed(seed, {3}));
    e *= noise_fraction * frobenius_norm(y) / frobenius_norm(e);
    y += e;
  }
  return y;
}

std::vector<BenchRow> run_bench(const BenchOptions& options) {
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
  };
  auto time_runs = [&](std::size_t repeats, const std::function<QMatrix()>& f, QMatrix& last) {
    std::vector<double> t;
    for (std::size_t i = 0; i < repeats; ++i) {
      const auto start = Clock::now();
      last = f();
      t.push_back(seconds_since(start));
    }
    return median(t);
  };

  std::vector<BenchRow> rows;
  for (const auto& size : options.sizes) {
    const QMatrix y = synthetic_low_rank(size.rows, size.cols, options.rank, 0.01,
                                         derive_seed(options.seed, {size.rows, size.cols}));
    const double norm = frobenius_norm(y);
    QMatrix x;

    BrpConfig brp;
    brp.rank = options.rank;
    brp.seed = options.seed;
    BenchRow r{size.rows, size.cols, options.rank, "clqa_brp", 0.0, 0.0};
    r.median_seconds = time_runs(options.repeats, [&] { return clqa_brp(y, brp); }, x);
    r.error = frobenius_norm(y - x) / norm;
    rows.push_back(r);

    if (options.run_oracle) {
      const std::size_t reps = options.oracle_repeats > 0 ? options.oracle_repeats : options.repeats;
      BenchRow o{size.rows, size.cols, options.rank, "truncated_qsvd", 0.0, 0.0};
      o.median_seconds = time_runs(reps, [&] { return truncated_qsvd(y, options.rank); }, x);
      o.error = frobenius_norm(y - x) / norm;
      rows.push_back(o);
    }
  }
  return rows;
}

std::string format_bench_row(const BenchRow& row) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%s,%.6e,%.6e", row.rows, row.cols, row.rank,
                row.method.c_str(), row.median_seconds, row.error);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quaternion low-rank approximation and color image denoising", "clqa"};
  app.set_version_flag("--version", CLQA_VERSION);
  app.require_subcommand(1);

  AddNoise add_noise(app.add_subcommand("add-noise", "add Gaussian noise to an image"));
  Denoise denoise(app.add_subcommand("denoise", "denoise a color image"));
  Approx approx(app.add_subcommand("approx", "rank-r approximation of a QMAT1 matrix"));
  Bench bench(app.add_subcommand("bench", "time clqa_brp against the truncated QSVD"));
  Metrics metrics(app.add_subcommand("metrics", "PSNR and SSIM of two images"));

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidationFailure;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "add-noise") return add_noise.run(out);
    if (name == "denoise") return denoise.run(out);
    if (name == "approx") return approx.run(out);
    if (name == "bench") return bench.run(out);
    return metrics.run(out);
  } catch (const Error& e) {
    err << "clqa: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::bad_alloc&) {
    err << "clqa: out of memory\n";
    return kComputeFailure;
  } catch (const std::exception& e) {
    err << "clqa: " << e.what() << '\n';
    return kComputeFailure;
  }
}

}  // namespace clqa::cli
