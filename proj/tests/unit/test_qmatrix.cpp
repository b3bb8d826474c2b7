#include <doctest.h>

#include <cmath>
#include <numeric>

#include "clqa/error.hpp"
#include "clqa/qmatrix.hpp"
#include "clqa/seed.hpp"
#include "oracles.hpp"

using clqa::QMatrix;
using clqa::Quaternion;

TEST_CASE("construction and element access") {
  QMatrix m(2, 3);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.shape_string() == "2x3");
  m.set(1, 2, {1, 2, 3, 4});
  CHECK(m(1, 2) == Quaternion{1, 2, 3, 4});
  // plane layout: plane p, row-major
  CHECK(m.plane(clqa::Component::Z)[1 * 3 + 2] == 4.0);
  CHECK(m.raw()[3 * 6 + 5] == 4.0);
  CHECK_THROWS_AS(QMatrix(0, 3), clqa::DimensionMismatch);
  CHECK(QMatrix().empty());
}

TEST_CASE("matmul matches the triple-loop oracle") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> dim(1, 16);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = dim(rng), k = dim(rng), n = dim(rng);
    const QMatrix a = oracle::random_matrix(m, k, 100 + t);
    const QMatrix b = oracle::random_matrix(k, n, 900 + t);
    worst = std::max(worst, oracle::max_abs(clqa::matmul(a, b), oracle::matmul(a, b)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("matmul rejects mismatched shapes with both shapes in the message") {
  const QMatrix a(2, 3), b(4, 2);
  try {
    (void)clqa::matmul(a, b);
    FAIL("expected DimensionMismatch");
  } catch (const clqa::DimensionMismatch& e) {
    const std::string what = e.what();
    CHECK(what.find("2x3") != std::string::npos);
    CHECK(what.find("4x2") != std::string::npos);
  }
}

TEST_CASE("identity is neutral and matmul is not commutative") {
  const QMatrix a = oracle::random_matrix(5, 5, 3);
  CHECK(clqa::matmul(QMatrix::identity(5), a) == a);
  CHECK(clqa::matmul(a, QMatrix::identity(5)) == a);
  const QMatrix b = oracle::random_matrix(5, 5, 4);
  CHECK(clqa::max_abs_diff(clqa::matmul(a, b), clqa::matmul(b, a)) > 1e-3);
}

TEST_CASE("conjugate transpose") {
  const QMatrix a = oracle::random_matrix(4, 7, 5);
  const QMatrix b = oracle::random_matrix(7, 3, 6);
  CHECK(clqa::conj_transpose(a) == oracle::conj_transpose(a));
  CHECK(clqa::conj_transpose(clqa::conj_transpose(a)) == a);
  const QMatrix lhs = clqa::conj_transpose(clqa::matmul(a, b));
  const QMatrix rhs = clqa::matmul(clqa::conj_transpose(b), clqa::conj_transpose(a));
  CHECK(clqa::max_abs_diff(lhs, rhs) <= 1e-13);
}

TEST_CASE("frobenius norm agrees with the explicit Gram trace") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const QMatrix a = oracle::random_matrix(1 + s % 9, 1 + s % 5, s);
    const double f = clqa::frobenius_norm(a);
    CHECK(f == doctest::Approx(oracle::frobenius(a)).epsilon(1e-14));
    CHECK(f * f == doctest::Approx(clqa::trace_gram(a)).epsilon(1e-13));
    CHECK(clqa::squared_frobenius_norm(a) == doctest::Approx(f * f).epsilon(1e-14));
  }
}

TEST_CASE("arithmetic operators") {
  const QMatrix a = oracle::random_matrix(3, 3, 1);
  const QMatrix b = oracle::random_matrix(3, 3, 2);
  const QMatrix s = a + b;
  CHECK(s(1, 2).y == doctest::Approx(a(1, 2).y + b(1, 2).y));
  CHECK(clqa::max_abs_diff(s - b, a) <= 1e-15);
  CHECK((a * 2.0)(2, 0).z == doctest::Approx(2.0 * a(2, 0).z));
  CHECK_THROWS_AS(a + QMatrix(3, 2), clqa::DimensionMismatch);
}

TEST_CASE("outer product is u v^H") {
  const QMatrix u = oracle::random_matrix(4, 1, 7);
  const QMatrix v = oracle::random_matrix(3, 1, 8);
  const QMatrix o = clqa::outer(u, v);
  CHECK(o.rows() == 4);
  CHECK(o.cols() == 3);
  const Quaternion expect = oracle::product(u(2, 0), clqa::conjugate(v(1, 0)));
  CHECK(o(2, 1).w == doctest::Approx(expect.w));
  CHECK(o(2, 1).z == doctest::Approx(expect.z));
  CHECK_THROWS_AS(clqa::outer(QMatrix(2, 2), v), clqa::DimensionMismatch);
}

TEST_CASE("columns slices a block") {
  const QMatrix a = oracle::random_matrix(3, 6, 9);
  const QMatrix c = a.columns(2, 3);
  CHECK(c.cols() == 3);
  CHECK(c(1, 0) == a(1, 2));
  CHECK(c(2, 2) == a(2, 4));
  CHECK_THROWS_AS(a.columns(5, 2), clqa::DimensionMismatch);
}

TEST_CASE("solve_linear on diag(2, j) gives diag(0.5, -j)") {
  QMatrix a(2, 2);
  a.set(0, 0, {2, 0, 0, 0});
  a.set(1, 1, Quaternion::j());
  const QMatrix x = clqa::solve_linear(a, QMatrix::identity(2));
  CHECK(x(0, 0) == Quaternion{0.5, 0, 0, 0});
  CHECK(x(1, 1) == Quaternion{0, 0, -1, 0});
  CHECK(x(0, 1) == Quaternion{});
  CHECK(x(1, 0) == Quaternion{});
}

TEST_CASE("solve_linear residuals over random systems") {
  double worst = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t n = 1 + s % 12;
    const QMatrix a = oracle::random_matrix(n, n, 1000 + s);
    const QMatrix b = oracle::random_matrix(n, 1 + s % 4, 2000 + s);
    const QMatrix x = clqa::solve_linear(a, b);
    const double res = oracle::frobenius(oracle::matmul(a, x) - b);
    const double scale = oracle::frobenius(a) * oracle::frobenius(x) + oracle::frobenius(b);
    worst = std::max(worst, res / scale);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("solve_linear applies the inverse on the left in a noncommutative ring") {
  // a x = b with scalar-free quaternion entries; x b^-1 would differ.
  QMatrix a(1, 1), b(1, 1);
  a.set(0, 0, Quaternion::i());
  b.set(0, 0, Quaternion::j());
  const QMatrix x = clqa::solve_linear(a, b);
  // i x = j  =>  x = -i j = -k
  CHECK(x(0, 0) == Quaternion{0, 0, 0, -1});
}

TEST_CASE("solve_linear reports the pivot of a singular system") {
  QMatrix a = oracle::random_matrix(4, 4, 3);
  // third column = first column times a quaternion scalar on the right
  const Quaternion q{0.3, -1.0, 0.5, 2.0};
  for (std::size_t r = 0; r < 4; ++r) a.set(r, 2, oracle::product(a(r, 0), q));
  try {
    (void)clqa::solve_linear(a, QMatrix::identity(4));
    FAIL("expected SingularMatrix");
  } catch (const clqa::SingularMatrix& e) {
    CHECK(e.pivot() == 2);
  }
  CHECK_THROWS_AS(clqa::solve_linear(QMatrix(3, 3), QMatrix::identity(3)), clqa::SingularMatrix);
  CHECK_THROWS_AS(clqa::solve_linear(QMatrix(3, 2), QMatrix(3, 1)), clqa::DimensionMismatch);
}

TEST_CASE("gaussian random matrices are reproducible and standard normal") {
  const QMatrix a = clqa::random_gaussian_qmatrix(200, 50, 42);
  CHECK(a == clqa::random_gaussian_qmatrix(200, 50, 42));
  CHECK_FALSE(a == clqa::random_gaussian_qmatrix(200, 50, 43));
  const auto v = a.raw();
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double var = 0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= n - 1;
  // 40000 samples: standard error of the mean is 0.005, of the variance ~0.007
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(var - 1.0) < 0.04);
}

TEST_CASE("seed derivation") {
  // first output of the reference splitmix64 generator seeded with 0
  CHECK(clqa::splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(clqa::derive_seed(7, {1, 2}) == clqa::derive_seed(7, {1, 2}));
  CHECK(clqa::derive_seed(7, {1, 2}) != clqa::derive_seed(7, {2, 1}));
  CHECK(clqa::derive_seed(7, {1}) != clqa::derive_seed(8, {1}));
  CHECK(clqa::derive_seed(7, {0}) != clqa::derive_seed(7, {0, 0}));
}

TEST_CASE("1x1 products reduce to the quaternion product") {
  QMatrix a(1, 1), b(1, 1);
  a.set(0, 0, Quaternion::i());
  b.set(0, 0, Quaternion::j());
  CHECK(clqa::matmul(a, b)(0, 0) == Quaternion::k());
}

TEST_CASE("conjugate transpose of real and imaginary entries") {
  const std::vector<double> vals = {1, 2, 3, 4, 5, 6};
  const QMatrix real = QMatrix::from_real(2, 3, vals);
  const QMatrix t = clqa::conj_transpose(real);
  CHECK(t(2, 1) == Quaternion{6, 0, 0, 0});
  CHECK(t(0, 1) == Quaternion{4, 0, 0, 0});
  QMatrix m(2, 2);
  m.set(0, 1, Quaternion::i());
  CHECK(clqa::conj_transpose(m)(1, 0) == Quaternion{0, -1, 0, 0});
}

TEST_CASE("frobenius norm examples and inequalities") {
  CHECK(clqa::frobenius_norm(QMatrix(3, 2)) == 0.0);
  QMatrix ones(2, 2);
  for (double& v : ones.raw()) v = 1.0;
  CHECK(clqa::frobenius_norm(ones) == 4.0);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const QMatrix a = oracle::random_matrix(5, 4, s), b = oracle::random_matrix(4, 6, 50 + s);
    // summation order differs after transposing
    CHECK(clqa::frobenius_norm(clqa::conj_transpose(a)) ==
          doctest::Approx(clqa::frobenius_norm(a)).epsilon(1e-14));
    CHECK(clqa::frobenius_norm(clqa::matmul(a, b)) <=
          clqa::frobenius_norm(a) * clqa::frobenius_norm(b));
  }
}

TEST_CASE("per-plane statistics of a 1000 x 10 gaussian draw") {
  const QMatrix a = clqa::random_gaussian_qmatrix(1000, 10, 7);
  for (int p = 0; p < 4; ++p) {
    const auto v = a.plane(static_cast<clqa::Component>(p));
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= n - 1;
    CHECK(std::abs(mean) <= 0.15);
    CHECK(std::abs(var - 1.0) <= 0.15);
  }
}

TEST_CASE("solve_linear with the identity and a well-conditioned 7x7 system") {
  const QMatrix b = oracle::random_matrix(3, 2, 1);
  CHECK(clqa::solve_linear(QMatrix::identity(3), b) == b);
  QMatrix a = oracle::random_matrix(7, 7, 2);
  for (std::size_t i = 0; i < 7; ++i) a.set(i, i, a(i, i) + Quaternion{6, 0, 0, 0});
  const QMatrix rhs = oracle::random_matrix(7, 3, 3);
  const QMatrix x = clqa::solve_linear(a, rhs);
  CHECK(oracle::frobenius(oracle::matmul(a, x) - rhs) <= 1e-10);
}
