#include <doctest.h>

#include "ntucker/error.hpp"
#include "ntucker/linalg.hpp"
#include "ntucker/random.hpp"
#include "oracles.hpp"

using namespace ntucker;

namespace {

double ortho_defect(const Matrix& q) {
  return (q.adjoint() * q - Matrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

bool upper_triangular(const Matrix& r) {
  for (Index j = 0; j < r.cols(); ++j)
    for (Index i = j + 1; i < r.rows(); ++i)
      if (r(i, j) != Scalar(0)) return false;
  return true;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("QR of scaled identities") {
  const QRFactors a = qr_thin(Matrix::Identity(3, 3));
  CHECK((a.Q - Matrix::Identity(3, 3)).norm() <= 1e-15);
  CHECK((a.R - Matrix::Identity(3, 3)).norm() <= 1e-15);
  const QRFactors b = qr_thin(2.0 * Matrix::Identity(2, 2));
  CHECK((b.Q - Matrix::Identity(2, 2)).norm() <= 1e-15);
  CHECK((b.R - 2.0 * Matrix::Identity(2, 2)).norm() <= 1e-15);
}

TEST_CASE("QR of random tall matrices") {
  Rng rng(31);
  for (auto [m, n] : {std::pair<Index, Index>{6, 3}, {40, 10}, {5, 5}, {7, 1}}) {
    const Matrix a = random_matrix(rng, m, n);
    const QRFactors f = qr_thin(a);
    CHECK(f.Q.rows() == m);
    CHECK(f.Q.cols() == n);
    CHECK(ortho_defect(f.Q) <= 1e-12);
    CHECK((f.Q * f.R - a).norm() <= 1e-12 * a.norm());
    CHECK(upper_triangular(f.R));
    for (Index i = 0; i < n; ++i) {
      CHECK(f.R(i, i).imag() == 0.0);
      CHECK(f.R(i, i).real() >= 0.0);
    }
  }
  CHECK_THROWS_AS(qr_thin(Matrix::Zero(2, 3)), Error);
}

TEST_CASE("QR is deterministic and handles rank deficiency") {
  Rng rng(37);
  const Matrix a = random_matrix(rng, 8, 4);
  const QRFactors f1 = qr_thin(a), f2 = qr_thin(a);
  CHECK(f1.Q == f2.Q);
  CHECK(f1.R == f2.R);
  Matrix b = a;
  b.col(2) = b.col(0) + b.col(1);
  const QRFactors g = qr_thin(b);
  CHECK(ortho_defect(g.Q) <= 1e-12);
  CHECK((g.Q * g.R - b).norm() <= 1e-12 * b.norm());
  CHECK(std::abs(g.R(2, 2)) <= 1e-12 * b.norm());
  const QRFactors z = qr_thin(Matrix::Zero(5, 2));
  CHECK(ortho_defect(z.Q) <= 1e-12);
  CHECK(z.R.norm() == 0.0);
}

TEST_CASE("SVD small examples") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const SVDFactors s = svd_thin(d);
  CHECK(s.sigma(0) == doctest::Approx(3.0));
  CHECK(s.sigma(1) == doctest::Approx(1.0));
  const SVDFactors z = svd_thin(Matrix::Zero(4, 3));
  CHECK(z.sigma.norm() == 0.0);
  CHECK(ortho_defect(z.U) <= 1e-12);
  CHECK(ortho_defect(z.V) <= 1e-12);
}

TEST_CASE("SVD against the Gram-eigenvalue oracle") {
  Rng rng(41);
  for (auto [m, n] : {std::pair<Index, Index>{5, 4}, {4, 5}, {30, 6}, {6, 30}, {7, 7}}) {
    const Matrix a = random_matrix(rng, m, n);
    const SVDFactors f = svd_thin(a);
    const Index k = std::min(m, n);
    REQUIRE(f.sigma.size() == k);
    CHECK(ortho_defect(f.U) <= 1e-12);
    CHECK(ortho_defect(f.V) <= 1e-12);
    CHECK((f.U * f.sigma.cast<Scalar>().asDiagonal() * f.V.adjoint() - a).norm() <= 1e-10 * a.norm());
    const auto ref = oracle::gram_singular_values(a);
    for (Index i = 0; i < k; ++i) {
      CHECK(std::abs(f.sigma(i) - ref[static_cast<std::size_t>(i)]) <= 1e-10 * ref[0]);
      if (i > 0) CHECK(f.sigma(i) <= f.sigma(i - 1));
    }
  }
}

TEST_CASE("SVD of a rank-deficient matrix") {
  Rng rng(43);
  const Matrix a = random_matrix(rng, 9, 2) * random_matrix(rng, 2, 6);
  const SVDFactors f = svd_thin(a);
  CHECK(f.sigma(2) <= 1e-12 * f.sigma(0));
  CHECK(ortho_defect(f.U) <= 1e-12);
  CHECK(ortho_defect(f.V) <= 1e-12);
  CHECK((f.U * f.sigma.cast<Scalar>().asDiagonal() * f.V.adjoint() - a).norm() <= 1e-10 * a.norm());
}

TEST_CASE("HOSVD truncation") {
  Rng rng(47);
  SUBCASE("exact multilinear rank is reconstructed") {
    const std::vector<Index> ranks{2, 3, 2};
    const DenseTensor x = random_tucker(rng, Shape{6, 7, 5}, ranks).dense();
    const TuckerTensor y = hosvd_truncate(x, ranks);
    CHECK(y.ranks() == ranks);
    CHECK(fro_distance(y.dense(), x) <= 1e-10 * fro_norm(x));
    CHECK_NOTHROW(y.validate());
  }
  SUBCASE("full ranks are exact") {
    const DenseTensor x = random_tensor(rng, Shape{3, 4, 2});
    const std::vector<Index> full{3, 4, 2};
    CHECK(fro_distance(hosvd_truncate(x, full).dense(), x) <= 1e-12 * fro_norm(x));
  }
  SUBCASE("error obeys the discarded singular value bound") {
    for (int rep = 0; rep < 5; ++rep) {
      const DenseTensor x = random_tensor(rng, Shape{6, 6, 6});
      const std::vector<Index> ranks{2, 2, 2};
      double tail = 0.0, best_mode = 0.0;
      for (Index i = 0; i < 3; ++i) {
        const auto s = oracle::gram_singular_values(matricize(x, i));
        double t = 0.0;
        for (std::size_t k = 2; k < s.size(); ++k) t += s[k] * s[k];
        tail += t;
        best_mode = std::max(best_mode, t);
      }
      const double err = fro_distance(hosvd_truncate(x, ranks).dense(), x);
      CHECK(err * err <= tail * (1 + 1e-12));
      // Any rank-(2,2,2) tensor is at least as far as the worst single-mode truncation.
      CHECK(err <= std::sqrt(3.0) * std::sqrt(tail));
      CHECK(err * err >= best_mode * (1 - 1e-12));
    }
  }
  SUBCASE("invalid ranks are rejected") {
    const DenseTensor x = random_tensor(rng, Shape{3, 4});
    const std::vector<Index> too_big{4, 2}, wrong_count{2};
    CHECK_THROWS_AS(hosvd_truncate(x, too_big), Error);
    CHECK_THROWS_AS(hosvd_truncate(x, wrong_count), Error);
  }
}

TEST_CASE("pseudoinverse satisfies the Penrose conditions") {
  Rng rng(53);
  const Matrix a = random_matrix(rng, 6, 2) * random_matrix(rng, 2, 4);
  Index rank = -1;
  const Matrix p = pseudoinverse(a, 1e-12, &rank);
  CHECK(rank == 2);
  CHECK((a * p * a - a).norm() <= 1e-10 * a.norm());
  CHECK((p * a * p - p).norm() <= 1e-10 * p.norm());
  CHECK(((a * p).adjoint() - a * p).norm() <= 1e-10);
  CHECK(((p * a).adjoint() - p * a).norm() <= 1e-10);
}

TEST_CASE("random orthonormal factors") {
  Rng a(59), b(59);
  const Matrix u = random_orthonormal(a, 10, 4);
  CHECK(ortho_defect(u) <= 1e-12);
  CHECK(u == random_orthonormal(b, 10, 4));
}

TEST_CASE("HOSVD factors stay orthonormal on long unfoldings") {
  Rng rng(61);
  const std::vector<Index> ranks{6, 6, 6};
  const TuckerTensor a = random_tucker(rng, Shape{60, 60, 60}, ranks);
  const DenseTensor x = a.dense();
  const TuckerTensor t = hosvd_truncate(x, ranks);
  for (const Matrix& u : t.factors) CHECK(ortho_defect(u) <= 2e-15 * static_cast<double>(u.cols()));
  CHECK(fro_distance(t.dense(), x) <= 1e-14 * fro_norm(x));
}

}  // TEST_SUITE
