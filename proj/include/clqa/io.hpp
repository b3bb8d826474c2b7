#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "clqa/color_image.hpp"
#include "clqa/qmatrix.hpp"

namespace clqa::io {

// QMAT1 layout (all integers and floats little-endian):
//   bytes 0..4   "QMAT1"
//   u64          rows
//   u64          cols
//   f64[rows*cols] x 4   planes w, x, y, z, each row-major
inline constexpr char kQmatMagic[] = "QMAT1";

// QIMGF1 layout:
//   bytes 0..5   "QIMGF1"
//   u64          height
//   u64          width
//   f64[height*width] x 3   planes R, G, B, each row-major
inline constexpr char kQimgMagic[] = "QIMGF1";

std::vector<unsigned char> encode_qmat(const QMatrix& m);
/// Throws FormatError with the byte offset of the first problem.
QMatrix decode_qmat(const std::vector<unsigned char>& bytes);
void write_qmat(const std::filesystem::path& path, const QMatrix& m);
QMatrix read_qmat(const std::filesystem::path& path);

std::vector<unsigned char> encode_qimgf(const ColorImage& img);
ColorImage decode_qimgf(const std::vector<unsigned char>& bytes);
void write_qimgf(const std::filesystem::path& path, const ColorImage& img);

/// 8-bit RGB PNG. Values are clipped to [0, 255] and rounded on write; any
/// PNG color type is expanded to RGB on read.
void write_png(const std::filesystem::path& path, const ColorImage& img);
ColorImage read_png(const std::filesystem::path& path);

/// Reads either a QIMGF1 float image or a PNG, chosen by the file's magic.
ColorImage read_image(const std::filesystem::path& path);

std::vector<unsigned char> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes);

/// Ordered "key = value" text file. Lines starting with '#' are comments.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value);
  template <typename T>
  void set_number(const std::string& key, T value) {
    set(key, format_number(value));
  }
  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string to_string() const;
  static Manifest parse(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static Manifest load(const std::filesystem::path& path);

  static std::string format_number(double v);
  static std::string format_number(unsigned long long v) { return std::to_string(v); }
  static std::string format_number(unsigned long v) { return std::to_string(v); }
  static std::string format_number(int v) { return std::to_string(v); }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace clqa::io
