#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "clqa/error.hpp"
#include "clqa/io.hpp"

namespace clqa::io {
namespace {

void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

class Reader {
 public:
  explicit Reader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  void expect_magic(const char* magic, const char* format) {
    const std::size_t len = std::strlen(magic);
    if (bytes_.size() < len || std::memcmp(bytes_.data(), magic, len) != 0) {
      throw FormatError(std::string("not a ") + format + " file: bad magic", 0);
    }
    pos_ = len;
  }

  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }

  double f64(const char* what) { return std::bit_cast<double>(u64(what)); }

  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(std::string("truncated ") + what, pos_);
    }
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

std::pair<std::size_t, std::size_t> read_dims(Reader& in, std::size_t planes) {
  const std::size_t dims_at = in.position();
  const std::uint64_t rows = in.u64("dimension header");
  const std::uint64_t cols = in.u64("dimension header");
  if (rows == 0 || cols == 0) throw FormatError("zero dimension", dims_at);
  // Guard the multiplication before trusting it for allocation.
  const std::uint64_t limit = in.remaining() / (8 * planes);
  if (rows > limit || cols > limit || rows * cols > limit) {
    throw FormatError("declared " + std::to_string(rows) + "x" + std::to_string(cols) +
                          " payload exceeds file size",
                      in.position());
  }
  return {static_cast<std::size_t>(rows), static_cast<std::size_t>(cols)};
}

void expect_end(const Reader& in) {
  if (in.remaining() != 0) throw FormatError("trailing bytes after payload", in.position());
}

}  // namespace

std::vector<unsigned char> encode_qmat(const QMatrix& m) {
  std::vector<unsigned char> out(kQmatMagic, kQmatMagic + std::strlen(kQmatMagic));
  out.reserve(out.size() + 16 + 8 * m.raw().size());
  put_u64(out, m.rows());
  put_u64(out, m.cols());
  for (double v : m.raw()) put_f64(out, v);
  return out;
}

QMatrix decode_qmat(const std::vector<unsigned char>& bytes) {
  Reader in(bytes);
  in.expect_magic(kQmatMagic, "QMAT1");
  const auto [rows, cols] = read_dims(in, 4);
  QMatrix m(rows, cols);
  for (double& v : m.raw()) v = in.f64("plane data");
  expect_end(in);
  return m;
}

std::vector<unsigned char> encode_qimgf(const ColorImage& img) {
  std::vector<unsigned char> out(kQimgMagic, kQimgMagic + std::strlen(kQimgMagic));
  out.reserve(out.size() + 16 + 24 * img.height() * img.width());
  put_u64(out, img.height());
  put_u64(out, img.width());
  for (int ch = 0; ch < 3; ++ch) {
    for (double v : img.channel(ch)) put_f64(out, v);
  }
  return out;
}

ColorImage decode_qimgf(const std::vector<unsigned char>& bytes) {
  Reader in(bytes);
  in.expect_magic(kQimgMagic, "QIMGF1");
  const auto [h, w] = read_dims(in, 3);
  ColorImage img(h, w);
  for (int ch = 0; ch < 3; ++ch) {
    for (double& v : img.channel(ch)) v = in.f64("channel data");
  }
  expect_end(in);
  return img;
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
  if (f.bad()) throw IoError("error while reading " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("error while writing " + path.string());
}

void write_qmat(const std::filesystem::path& path, const QMatrix& m) {
  write_file(path, encode_qmat(m));
}

QMatrix read_qmat(const std::filesystem::path& path) { return decode_qmat(read_file(path)); }

void write_qimgf(const std::filesystem::path& path, const ColorImage& img) {
  write_file(path, encode_qimgf(img));
}

ColorImage read_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  const std::size_t len = std::strlen(kQimgMagic);
  if (bytes.size() >= len && std::memcmp(bytes.data(), kQimgMagic, len) == 0) {
    return decode_qimgf(bytes);
  }
  return read_png(path);
}

}  // namespace clqa::io
