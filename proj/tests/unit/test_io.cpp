#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <limits>

#include "clqa/error.hpp"
#include "clqa/io.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using clqa::ColorImage;
using clqa::QMatrix;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "clqa_test_io";
  fs::create_directories(dir);
  return dir;
}

void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  put_u64(out, bits);
}

std::size_t offset_of(const std::vector<unsigned char>& bytes) {
  try {
    (void)clqa::io::decode_qmat(bytes);
  } catch (const clqa::FormatError& e) {
    return e.offset();
  }
  return std::numeric_limits<std::size_t>::max();
}

}  // namespace

TEST_CASE("QMAT1 encoding is byte-exact") {
  QMatrix m(2, 3);
  for (std::size_t i = 0; i < m.raw().size(); ++i) m.raw()[i] = 0.5 * static_cast<double>(i) - 3;
  std::vector<unsigned char> expect = {'Q', 'M', 'A', 'T', '1'};
  put_u64(expect, 2);
  put_u64(expect, 3);
  for (int p = 0; p < 4; ++p) {
    for (std::size_t r = 0; r < 2; ++r) {
      for (std::size_t c = 0; c < 3; ++c) {
        const auto q = m(r, c);
        put_f64(expect, p == 0 ? q.w : p == 1 ? q.x : p == 2 ? q.y : q.z);
      }
    }
  }
  CHECK(clqa::io::encode_qmat(m) == expect);
  CHECK(clqa::io::decode_qmat(expect) == m);
}

TEST_CASE("QMAT1 file round trip is bit-exact") {
  QMatrix m = oracle::random_matrix(7, 5, 3);
  m.raw()[0] = -0.0;
  m.raw()[1] = std::numeric_limits<double>::denorm_min();
  m.raw()[2] = std::numeric_limits<double>::infinity();
  const fs::path p = temp_dir() / "m.qmat";
  clqa::io::write_qmat(p, m);
  const QMatrix back = clqa::io::read_qmat(p);
  CHECK(std::memcmp(back.raw().data(), m.raw().data(), m.raw().size() * sizeof(double)) == 0);
  CHECK(fs::file_size(p) == 5 + 16 + 4 * 35 * 8);
}

TEST_CASE("malformed QMAT1 files report the byte offset") {
  const auto good = clqa::io::encode_qmat(oracle::random_matrix(2, 2, 1));
  auto bad_magic = good;
  bad_magic[0] = 'X';
  CHECK(offset_of(bad_magic) == 0);
  CHECK(offset_of({'Q', 'M'}) == 0);

  auto short_header = std::vector<unsigned char>(good.begin(), good.begin() + 9);
  CHECK(offset_of(short_header) == 5);

  auto no_cols = std::vector<unsigned char>(good.begin(), good.begin() + 17);
  CHECK(offset_of(no_cols) == 13);

  auto truncated = good;
  truncated.resize(good.size() - 3);
  CHECK(offset_of(truncated) == 21);  // payload start: declared size exceeds the file

  auto trailing = good;
  trailing.push_back(0);
  CHECK(offset_of(trailing) == good.size());

  std::vector<unsigned char> zero = {'Q', 'M', 'A', 'T', '1'};
  put_u64(zero, 0);
  put_u64(zero, 4);
  CHECK(offset_of(zero) == 5);

  std::vector<unsigned char> huge = {'Q', 'M', 'A', 'T', '1'};
  put_u64(huge, 1ULL << 40);
  put_u64(huge, 1ULL << 40);
  CHECK(offset_of(huge) == 21);
}

TEST_CASE("missing files raise I/O errors naming the path") {
  try {
    (void)clqa::io::read_qmat("/nonexistent/dir/x.qmat");
    FAIL("expected IoError");
  } catch (const clqa::IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/x.qmat") != std::string::npos);
  }
}

TEST_CASE("QIMGF1 layout and round trip") {
  ColorImage img = oracle::random_image(3, 4, 2, -50, 300);
  const auto bytes = clqa::io::encode_qimgf(img);
  CHECK(bytes.size() == 6 + 16 + 3 * 12 * 8);
  CHECK(std::memcmp(bytes.data(), "QIMGF1", 6) == 0);
  CHECK(bytes[6] == 3);
  CHECK(bytes[14] == 4);
  double first_g;
  std::memcpy(&first_g, bytes.data() + 22 + 12 * 8, 8);
  CHECK(first_g == img.at(0, 0, 1));
  CHECK(clqa::io::decode_qimgf(bytes) == img);

  const fs::path p = temp_dir() / "img.qimgf";
  clqa::io::write_qimgf(p, img);
  CHECK(clqa::io::read_image(p) == img);

  auto cut = bytes;
  cut.resize(30);
  CHECK_THROWS_AS(clqa::io::decode_qimgf(cut), clqa::FormatError);
}

TEST_CASE("PNG round trip is value-exact for 8-bit data") {
  ColorImage img(9, 13);
  std::mt19937_64 rng(4);
  for (int ch = 0; ch < 3; ++ch) {
    for (double& v : img.channel(ch)) v = static_cast<double>(rng() % 256);
  }
  const fs::path p = temp_dir() / "img.png";
  clqa::io::write_png(p, img);
  CHECK(clqa::io::read_png(p) == img);
  CHECK(clqa::io::read_image(p) == img);
}

TEST_CASE("PNG writing clips and rounds") {
  ColorImage img(1, 4);
  const double vals[4] = {-20.0, 12.4, 12.6, 300.0};
  for (int c = 0; c < 4; ++c) {
    for (int ch = 0; ch < 3; ++ch) img.set(0, c, ch, vals[c]);
  }
  const fs::path p = temp_dir() / "clip.png";
  clqa::io::write_png(p, img);
  const ColorImage back = clqa::io::read_png(p);
  CHECK(back.at(0, 0, 0) == 0.0);
  CHECK(back.at(0, 1, 1) == 12.0);
  CHECK(back.at(0, 2, 2) == 13.0);
  CHECK(back.at(0, 3, 0) == 255.0);
}

TEST_CASE("non-PNG input is rejected") {
  const fs::path p = temp_dir() / "junk.png";
  clqa::io::write_file(p, {'n', 'o', 't', ' ', 'p', 'n', 'g'});
  CHECK_THROWS_AS(clqa::io::read_png(p), clqa::Error);
}

TEST_CASE("manifest round trip") {
  clqa::io::Manifest m;
  m.set("command", "denoise");
  m.set_number("delta", 0.1);
  m.set_number("rank", 7);
  m.set("path", "a b/c=d.png");
  m.set("rank", "15");  // overwrite keeps position
  const std::string text = m.to_string();
  const auto back = clqa::io::Manifest::parse(text);
  CHECK(back.entries() == m.entries());
  CHECK(back.get("rank") == "15");
  CHECK(back.get("path") == "a b/c=d.png");
  CHECK(std::stod(back.get("delta")) == 0.1);
  CHECK(m.entries().size() == 4);
  CHECK_FALSE(back.has("missing"));
  CHECK_THROWS_AS(back.get("missing"), clqa::ConfigError);
}

TEST_CASE("manifest parsing") {
  const auto m = clqa::io::Manifest::parse("# comment\n\n  sigma = 50 \nseed=3\n");
  CHECK(m.get("sigma") == "50");
  CHECK(m.get("seed") == "3");
  CHECK_THROWS_AS(clqa::io::Manifest::parse("no separator\n"), clqa::ConfigError);
  CHECK_THROWS_AS(clqa::io::Manifest::parse(" = 4\n"), clqa::ConfigError);

  const fs::path p = temp_dir() / "run.manifest";
  clqa::io::Manifest w;
  w.set_number("x", 1.0 / 3.0);
  w.save(p);
  CHECK(std::stod(clqa::io::Manifest::load(p).get("x")) == 1.0 / 3.0);
}
