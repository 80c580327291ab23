#include "doctest.h"
#include "oracles.hpp"

#include "mvgamma/errors.hpp"
#include "mvgamma/linalg.hpp"

#include <random>

using namespace mvgamma;

TEST_CASE("CovMatrix symmetrizes small noise and rejects real asymmetry") {
  Matrix m(2, 2);
  m << 2.0, 0.5 + 1e-12, 0.5, 1.0;
  const CovMatrix s(m);
  CHECK(s(0, 1) == s(1, 0));
  CHECK(s.diag()(0) == 2.0);

  m(0, 1) = 0.6;
  CHECK_THROWS_AS(CovMatrix{m}, PreconditionError);
}

TEST_CASE("CovMatrix rejects indefinite, non-square and non-finite input") {
  Matrix m(2, 2);
  m << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(CovMatrix{m}, PreconditionError);
  CHECK_THROWS_AS(CovMatrix{Matrix(2, 3)}, PreconditionError);
  Matrix nan = Matrix::Identity(2, 2);
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(CovMatrix{nan}, PreconditionError);
}

TEST_CASE("DiagScale rejects negative entries") {
  CHECK_THROWS_AS(DiagScale({1.0, -0.1}), PreconditionError);
  const DiagScale t{0.5, 1.0, 2.0};
  CHECK(t.head(1)[0] == 0.5);
  CHECK(t.tail(2)[1] == 2.0);
}

TEST_CASE("partition with zero cross block has schur equal to S11") {
  Matrix m = Matrix::Zero(3, 3);
  m << 2.0, 0.3, 0.0, 0.3, 1.0, 0.0, 0.0, 0.0, 4.0;
  const Partition part = partition_blocks(CovMatrix(m), 2);
  CHECK((part.schur.matrix() - m.topLeftCorner(2, 2)).norm() == doctest::Approx(0.0));
  CHECK(part.s21 == part.s12.transpose());
}

TEST_CASE("partition of 2x2 correlation gives 1 - rho^2") {
  Matrix m(2, 2);
  m << 1.0, 0.5, 0.5, 1.0;
  const Partition part = partition_blocks(CovMatrix(m), 1);
  CHECK(part.schur(0, 0) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("partition rejects p1 out of range") {
  const CovMatrix s = CovMatrix::identity(3);
  CHECK_THROWS_AS(partition_blocks(s, 0), PreconditionError);
  CHECK_THROWS_AS(partition_blocks(s, 3), PreconditionError);
}

TEST_CASE("schur inverse is the leading block of the full inverse") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::Index p = 2 + rep % 6;
    const CovMatrix s(oracle::random_spd(p, rng));
    for (Eigen::Index p1 = 1; p1 < p; ++p1) {
      const Partition part = partition_blocks(s, p1);
      const Matrix lead = s.matrix().fullPivLu().inverse().topLeftCorner(p1, p1);
      const Matrix schur_inv = part.schur.matrix().fullPivLu().inverse();
      CHECK((lead - schur_inv).norm() / lead.norm() <= 1e-9);
    }
  }
}

TEST_CASE("determinant chain at T = 0 and Sigma = I") {
  std::mt19937_64 rng(3);
  const CovMatrix s(oracle::random_spd(4, rng));
  const auto zero = det_block_factorization(s, DiagScale::zero(4), 2);
  for (const auto& term : zero.chain) CHECK(term.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(zero.direct == doctest::Approx(1.0));

  const DiagScale t{0.3, 1.5, 0.0, 2.0};
  const auto id = det_block_factorization(CovMatrix::identity(4), t, 1);
  const double expected = 1.3 * 2.5 * 1.0 * 3.0;
  CHECK(id.direct == doctest::Approx(expected).epsilon(1e-14));
  for (const auto& term : id.chain) CHECK(term.value == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("determinant chain matches a long double determinant") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::Index p = 2 + rep % 7;
    const CovMatrix s(oracle::random_spd(p, rng));
    const Vector t = oracle::random_t(p, rng);
    const Matrix full = Matrix::Identity(p, p) + s.matrix() * t.asDiagonal();
    const double oracle_det = static_cast<double>(oracle::det_ld(full));
    for (Eigen::Index p1 = 1; p1 < p; ++p1) {
      const auto rep_ = det_block_factorization(s, DiagScale(t), p1);
      CHECK(std::abs(rep_.direct - oracle_det) / oracle_det <= 1e-12);
      CHECK(rep_.max_rel_error <= 1e-10);
      CHECK(rep_.chain.size() >= 5);
    }
  }
}

TEST_CASE("sylvester identity") {
  Matrix a = Matrix::Zero(2, 3);
  Matrix b = Matrix::Random(3, 2);
  auto [d1, d2] = sylvester_identity(a, b);
  CHECK(d1 == 1.0);
  CHECK(d2 == 1.0);

  Matrix a1(1, 1), b1(1, 1);
  a1 << 0.7;
  b1 << -3.0;
  std::tie(d1, d2) = sylvester_identity(a1, b1);
  CHECK(d1 == doctest::Approx(1.0 - 2.1));
  CHECK(d2 == doctest::Approx(1.0 - 2.1));

  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 100; ++rep) {
    const Matrix a12 = oracle::random_matrix(3, 2, rng, -2.0, 2.0);
    const Matrix b21 = oracle::random_matrix(2, 3, rng, -2.0, 2.0);
    std::tie(d1, d2) = sylvester_identity(a12, b21);
    const double direct = static_cast<double>(oracle::det_ld(Matrix::Identity(2, 2) + b21 * a12));
    CHECK(std::abs(d1 - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
    CHECK(std::abs(d1 - d2) <= 1e-12 * std::max(1.0, std::abs(d1)));
  }
  CHECK_THROWS_AS(sylvester_identity(Matrix(2, 3), Matrix(2, 3)), PreconditionError);
}

TEST_CASE("signature search on identity and on a Z-matrix inverse") {
  const auto id = find_signature_m_matrix(CovMatrix::identity(4));
  REQUIRE(id.has_value());
  for (int s : id->signs) CHECK(s == 1);

  Matrix prec(4, 4);
  prec << 2, -0.5, 0, 0, -0.5, 2, -0.7, 0, 0, -0.7, 2, -0.3, 0, 0, -0.3, 2;
  const auto tri = find_signature_m_matrix(CovMatrix(prec.inverse()));
  REQUIRE(tri.has_value());
  for (int s : tri->signs) CHECK(s == 1);
}

TEST_CASE("signature search flips coordinate 2") {
  Matrix prec(3, 3);
  prec << 2.0, 0.6, -0.4, 0.6, 2.0, 0.5, -0.4, 0.5, 2.0;
  const CovMatrix s(prec.inverse());
  const auto found = oracle::all_signatures(prec, 1e-12);
  REQUIRE(found.size() == 2);  // S and -S
  const auto sig = find_signature_m_matrix(s);
  REQUIRE(sig.has_value());
  CHECK(sig->signs == std::vector<int>{1, -1, 1});
  const Matrix z = sig->as_matrix() * s.inverse() * sig->as_matrix();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(z(i, j) <= 1e-12);
}

TEST_CASE("signature search agrees with brute force and is flip invariant") {
  std::mt19937_64 rng(21);
  int found = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const Eigen::Index p = 2 + rep % 4;
    const CovMatrix s(oracle::random_spd(p, rng));
    const auto sig = find_signature_m_matrix(s);
    const bool brute = !oracle::all_signatures(s.inverse(), 1e-12 * s.inverse().diagonal().maxCoeff()).empty();
    CHECK(sig.has_value() == brute);
    if (!sig) continue;
    ++found;
    Vector d(p);
    for (Eigen::Index i = 0; i < p; ++i) d(i) = (rng() & 1) ? 1.0 : -1.0;
    const CovMatrix flipped(d.asDiagonal() * s.matrix() * d.asDiagonal());
    CHECK(find_signature_m_matrix(flipped).has_value());
  }
  CHECK(found > 0);
  CHECK_THROWS_AS(find_signature_m_matrix(CovMatrix::identity(21)), PreconditionError);
}

TEST_CASE("lambda factorial decomposition of the identity is empty") {
  const FactorialForm f = lambda_factorial_decomposition(CovMatrix::identity(3));
  CHECK(f.m() == 0);
  REQUIRE(f.lambda().has_value());
  CHECK(*f.lambda() == doctest::Approx(1.0));
}

TEST_CASE("lambda factorial decomposition of equicorrelation") {
  const CovMatrix s(oracle::equicorrelation(3, 0.4));
  const FactorialForm f = lambda_factorial_decomposition(s);
  CHECK(*f.lambda() == doctest::Approx(0.6).epsilon(1e-13));
  REQUIRE(f.m() == 1);
  // single column proportional to the ones vector, A A^T = rho 11^T
  const Vector col = f.a().col(0);
  CHECK(std::abs(col(0)) == doctest::Approx(std::sqrt(0.4)).epsilon(1e-12));
  CHECK(col(0) == doctest::Approx(col(1)).epsilon(1e-12));
  CHECK(col(1) == doctest::Approx(col(2)).epsilon(1e-12));
  CHECK(f.reconstruction_error(s) <= 1e-14);
  CHECK((f.b() - f.w().asDiagonal() * f.a()).norm() == 0.0);
}

TEST_CASE("lambda factorial decomposition of random SPD") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::Index p = 2 + rep % 6;
    const CovMatrix s(oracle::random_spd(p, rng));
    const FactorialForm f = lambda_factorial_decomposition(s);
    CHECK(f.m() <= p - 1);
    CHECK(*f.lambda() > 0.0);
    CHECK(f.reconstruction_error(s) <= 1e-9);
    const double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(s.matrix()).eigenvalues()(0);
    CHECK(*f.lambda() == doctest::Approx(lmin).epsilon(1e-10));
    if (p == 5) CHECK(f.m() == 4);
  }
}

TEST_CASE("factorial form validation") {
  CHECK_THROWS_AS(FactorialForm(Vector::Constant(2, -1.0), Matrix::Zero(2, 1)), PreconditionError);
  CHECK_THROWS_AS(FactorialForm(Vector::Ones(2), Matrix::Zero(3, 1)), PreconditionError);
  const FactorialForm f(Vector::Ones(2), Matrix::Zero(2, 0));
  CHECK_NOTHROW(f.validate_against(CovMatrix::identity(2)));
  CHECK_THROWS_AS(f.validate_against(CovMatrix(2.0 * Matrix::Identity(2, 2))), PreconditionError);
}

TEST_CASE("log_det_lu") {
  Matrix m(2, 2);
  m << 2.0, 1.0, 0.0, 3.0;
  CHECK(log_det_lu(m) == doctest::Approx(std::log(6.0)));
  CHECK(det_lu(-m) == doctest::Approx(6.0));
  CHECK_THROWS_AS(log_det_lu(Matrix(-Matrix::Identity(1, 1))), NumericalError);
}
