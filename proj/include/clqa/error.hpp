#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clqa {

// Root of every error raised by the library. The CLI maps subclasses to
// exit codes (see cli.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  explicit SingularMatrix(std::size_t pivot)
      : Error("singular matrix: pivot " + std::to_string(pivot) +
              " below tolerance"),
        pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class AsymmetryError : public Error {
 public:
  explicit AsymmetryError(double deviation)
      : Error("complex matrix is not a quaternion adjoint (relative deviation " +
              std::to_string(deviation) + ")"),
        deviation_(deviation) {}
  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(int sweeps, double off_norm)
      : Error("Jacobi SVD did not converge after " + std::to_string(sweeps) +
              " sweeps (off-diagonal measure " + std::to_string(off_norm) + ")"),
        off_norm_(off_norm) {}
  double off_norm() const noexcept { return off_norm_; }

 private:
  double off_norm_;
};

class PairingError : public Error {
 public:
  using Error::Error;
};

class RankOutOfRange : public Error {
 public:
  using Error::Error;
};

class TooSmall : public Error {
 public:
  using Error::Error;
};

class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " at byte offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace clqa
