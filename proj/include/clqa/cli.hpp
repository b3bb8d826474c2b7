#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "clqa/qmatrix.hpp"

namespace clqa::cli {

// Stable exit-code contract.
enum ExitCode : int {
  kSuccess = 0,
  kComputeFailure = 1,
  kIoFailure = 2,
  kValidationFailure = 3,
};

/// Runs the command line `args` (args[0] is the program name). Normal output
/// goes to `out`, diagnostics to `err`; returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct BenchSize {
  std::size_t rows = 0;
  std::size_t cols = 0;
};

struct BenchOptions {
  std::vector<BenchSize> sizes;
  std::size_t rank = 15;
  std::size_t repeats = 3;
  std::size_t oracle_repeats = 0;  // 0: same as repeats
  bool run_oracle = true;
  std::uint64_t seed = 0;
};

struct BenchRow {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t rank = 0;
  std::string method;
  double median_seconds = 0.0;
  double error = 0.0;  // ||Y - X||_F / ||Y||_F
};

/// Times clqa_brp and truncated_qsvd on a rank-r signal plus 1% Gaussian
/// noise for every size.
std::vector<BenchRow> run_bench(const BenchOptions& options);

inline constexpr const char* kBenchHeader = "M,N,r,method,median_seconds,error";
std::string format_bench_row(const BenchRow& row);

/// Parses "128,256x512,..." (a bare number means a square size).
std::vector<BenchSize> parse_sizes(const std::string& text);

/// Product of random M x r and r x N Gaussian factors plus Gaussian noise
/// scaled to `noise_fraction` of the product's Frobenius norm.
QMatrix synthetic_low_rank(std::size_t rows, std::size_t cols, std::size_t rank,
                           double noise_fraction, std::uint64_t seed);

}  // namespace clqa::cli
