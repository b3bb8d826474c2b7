#include <doctest.h>

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "clqa/error.hpp"
#include "clqa/qsvd.hpp"
#include "oracles.hpp"

using clqa::QMatrix;
using clqa::Quaternion;

namespace {

QMatrix reconstruct(const clqa::Qsvd& d) {
  QMatrix sv = d.v;
  for (std::size_t j = 0; j < d.s.size(); ++j) {
    for (std::size_t i = 0; i < sv.rows(); ++i) sv.set(i, j, sv(i, j) * d.s[j]);
  }
  return oracle::matmul(d.u, oracle::conj_transpose(sv));
}

// Every quaternion singular value appears twice among the singular values of
// the complex adjoint; Eigen computes those independently.
std::vector<double> eigen_values(const QMatrix& q) {
  const auto c = oracle::adjoint(q);
  Eigen::MatrixXcd m(c.rows, c.cols);
  for (std::size_t i = 0; i < c.rows; ++i) {
    for (std::size_t j = 0; j < c.cols; ++j) m(i, j) = c.at(i, j);
  }
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
  std::vector<double> out;
  for (Eigen::Index i = 0; i < s.size(); i += 2) out.push_back(s(i));
  return out;
}

}  // namespace

TEST_CASE("diag(3 + 4i, 1) has singular values 5 and 1") {
  QMatrix q(2, 2);
  q.set(0, 0, {3, 4, 0, 0});
  q.set(1, 1, {1, 0, 0, 0});
  const auto d = clqa::qsvd(q);
  REQUIRE(d.s.size() == 2);
  CHECK(d.s[0] == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(d.s[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(oracle::max_abs(reconstruct(d), q) <= 1e-14);
}

TEST_CASE("the zero matrix has zero singular values and unitary factors") {
  const QMatrix z(5, 3);
  const auto d = clqa::qsvd(z);
  for (double s : d.s) CHECK(s == 0.0);
  CHECK(oracle::unitarity_error(d.u) <= 1e-14);
  CHECK(oracle::unitarity_error(d.v) <= 1e-14);
  CHECK(clqa::quaternion_rank(z) == 0);
}

TEST_CASE("random matrices: reconstruction, unitarity, ordering") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> rows(1, 32), cols(1, 24);
  double rec = 0, uni = 0;
  bool ordered = true;
  for (int t = 0; t < 100; ++t) {
    const QMatrix q = oracle::random_matrix(rows(rng), cols(rng), 300 + t);
    const auto d = clqa::qsvd(q);
    REQUIRE(d.s.size() == std::min(q.rows(), q.cols()));
    rec = std::max(rec, oracle::frobenius(reconstruct(d) - q) / oracle::frobenius(q));
    uni = std::max({uni, oracle::unitarity_error(d.u), oracle::unitarity_error(d.v)});
    for (std::size_t i = 0; i < d.s.size(); ++i) {
      if (d.s[i] < 0 || (i > 0 && d.s[i] > d.s[i - 1])) ordered = false;
    }
  }
  CHECK(rec <= 1e-10);
  CHECK(uni <= 1e-10);
  CHECK(ordered);
}

TEST_CASE("singular values agree with an independent complex SVD") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const QMatrix q = oracle::random_matrix(3 + s % 9, 2 + s % 7, 40 + s);
    const auto ours = clqa::quaternion_singular_values(q);
    const auto ref = eigen_values(q);
    REQUIRE(ours.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      CHECK(ours[i] == doctest::Approx(ref[i]).epsilon(1e-11).scale(ref[0]));
    }
  }
}

TEST_CASE("wide matrices are handled through the transpose") {
  const QMatrix q = oracle::random_matrix(4, 9, 7);
  const auto d = clqa::qsvd(q);
  CHECK(d.u.rows() == 4);
  CHECK(d.v.rows() == 9);
  CHECK(d.s.size() == 4);
  CHECK(oracle::frobenius(reconstruct(d) - q) <= 1e-12 * oracle::frobenius(q));
}

TEST_CASE("sum of squared singular values is the squared Frobenius norm") {
  const QMatrix q = oracle::random_matrix(12, 10, 8);
  double s2 = 0;
  for (double s : clqa::quaternion_singular_values(q)) s2 += s * s;
  CHECK(s2 == doctest::Approx(clqa::squared_frobenius_norm(q)).epsilon(1e-12));
}

TEST_CASE("singular values are invariant under quaternion unitary factors") {
  const QMatrix q = oracle::random_matrix(6, 5, 9);
  const auto u = clqa::qsvd(oracle::random_matrix(6, 6, 10)).u;
  const auto a = clqa::quaternion_singular_values(q);
  const auto b = clqa::quaternion_singular_values(clqa::matmul(u, q));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-12));
}

TEST_CASE("truncation is Frobenius optimal among random rank-r matrices") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const QMatrix q = oracle::random_matrix(10, 8, 60 + s);
    const auto sv = clqa::quaternion_singular_values(q);
    for (std::size_t r : {1u, 3u}) {
      const QMatrix t = clqa::truncated_qsvd(q, r);
      const double err = oracle::frobenius(q - t);
      double tail = 0;
      for (std::size_t i = r; i < sv.size(); ++i) tail += sv[i] * sv[i];
      CHECK(err == doctest::Approx(std::sqrt(tail)).epsilon(1e-10));
      CHECK(clqa::quaternion_rank(t) == r);
      for (int trial = 0; trial < 50; ++trial) {
        const QMatrix other = oracle::random_rank(10, 8, r, 1000 * s + trial);
        CHECK(oracle::frobenius(q - other) >= err);
      }
    }
  }
}

TEST_CASE("truncated_qsvd validates the rank") {
  const QMatrix q = oracle::random_matrix(4, 3, 1);
  CHECK_THROWS_AS(clqa::truncated_qsvd(q, 0), clqa::RankOutOfRange);
  CHECK_THROWS_AS(clqa::truncated_qsvd(q, 4), clqa::RankOutOfRange);
  CHECK(clqa::max_abs_diff(clqa::truncated_qsvd(q, 3), q) <= 1e-13);
}

TEST_CASE("numerical rank of exact low-rank products") {
  for (std::size_t r : {1u, 2u, 5u}) {
    CHECK(clqa::quaternion_rank(oracle::random_rank(12, 9, r, r)) == r);
  }
  CHECK(clqa::quaternion_rank(oracle::random_matrix(6, 4, 2)) == 4);
  CHECK(clqa::quaternion_rank(oracle::random_rank(12, 9, 2, 5), 1e6) == 0);
}

TEST_CASE("rank-one matrix from an outer product") {
  const QMatrix u = oracle::random_matrix(5, 1, 11);
  const QMatrix v = oracle::random_matrix(4, 1, 12);
  const auto s = clqa::quaternion_singular_values(clqa::outer(u, v));
  CHECK(s[0] == doctest::Approx(oracle::frobenius(u) * oracle::frobenius(v)).epsilon(1e-13));
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] <= 1e-13 * s[0]);
}

TEST_CASE("jacobi reports non-convergence") {
  clqa::JacobiOptions opts;
  opts.max_sweeps = 1;
  CHECK_THROWS_AS(clqa::qsvd(oracle::random_matrix(20, 20, 3), opts), clqa::ConvergenceError);
}

TEST_CASE("one-sided jacobi leaves orthogonal columns") {
  auto work = clqa::to_adjoint(oracle::random_matrix(6, 4, 13));
  const auto res = clqa::one_sided_jacobi(work);
  CHECK(res.sweeps >= 1);
  for (std::size_t a = 0; a < work.cols(); ++a) {
    for (std::size_t b = a + 1; b < work.cols(); ++b) {
      std::complex<double> g = 0;
      double na = 0, nb = 0;
      for (std::size_t i = 0; i < work.rows(); ++i) {
        g += std::conj(work(i, a)) * work(i, b);
        na += std::norm(work(i, a));
        nb += std::norm(work(i, b));
      }
      CHECK(std::abs(g) <= 1e-12 * std::sqrt(na * nb) + 1e-300);
    }
  }
}

TEST_CASE("truncation examples") {
  const QMatrix r1 = oracle::random_rank(7, 5, 1, 3);
  CHECK(oracle::frobenius(clqa::truncated_qsvd(r1, 1) - r1) <= 1e-10 * oracle::frobenius(r1));
  const QMatrix q = oracle::random_matrix(8, 8, 4);
  const auto s = clqa::quaternion_singular_values(q);
  double tail = 0;
  for (std::size_t i = 3; i < 8; ++i) tail += s[i] * s[i];
  CHECK(std::abs(oracle::frobenius(q - clqa::truncated_qsvd(q, 3)) - std::sqrt(tail)) <= 1e-9);
  const QMatrix w = oracle::random_matrix(6, 4, 5);
  CHECK(oracle::frobenius(clqa::truncated_qsvd(w, 4) - w) <= 1e-10 * oracle::frobenius(w));
}

TEST_CASE("rank of the identity") {
  CHECK(clqa::quaternion_rank(QMatrix::identity(6)) == 6);
}
