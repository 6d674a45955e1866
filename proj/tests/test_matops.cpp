#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hfopt/matops.hpp"

#include <cmath>
#include <random>

using namespace hfopt;

namespace {

Matrix random_sym(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
  return m;
}

Matrix random_antisym(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      m(i, j) = u(rng);
      m(j, i) = -m(i, j);
    }
  return m;
}

}  // namespace

TEST_CASE("frobenius inner product") {
  CHECK(frobenius_inner(Matrix::Identity(2, 2), Matrix::Identity(2, 2)) == 2.0);

  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 2, 3;
  b << 0, 1, 1, 0;
  CHECK(frobenius_inner(a, b) == 4.0);

  std::mt19937_64 rng(1);
  const Matrix s = random_sym(rng, 5);
  const Matrix t = random_antisym(rng, 5);
  CHECK(std::abs(frobenius_inner(s, t)) < 1e-14);

  CHECK_THROWS_AS(frobenius_inner(a, Matrix::Zero(3, 3)), std::invalid_argument);
  CHECK(frobenius_norm(a) == doctest::Approx(std::sqrt(frobenius_inner(a, a))));
}

TEST_CASE("commutator") {
  Matrix a = Vector::LinSpaced(2, 1, 2).asDiagonal();
  Matrix b = Vector::LinSpaced(2, 3, 4).asDiagonal();
  CHECK(commutator(a, b).norm() == 0.0);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1;
  Matrix m(2, 2);
  m << 0.7, 0.3, 0.3, -0.2;
  const Matrix c = commutator(d, m);
  CHECK(c(0, 0) == 0.0);
  CHECK(c(0, 1) == doctest::Approx(0.3));
  CHECK(c(1, 0) == doctest::Approx(-0.3));

  std::mt19937_64 rng(2);
  const Matrix s = random_sym(rng, 4);
  CHECK(commutator(s, s).norm() == 0.0);
  // [A,B] antisymmetric for symmetric A, B
  const Matrix t = random_sym(rng, 4);
  const Matrix ab = commutator(s, t);
  CHECK((ab + ab.transpose()).norm() < 1e-14);
}

TEST_CASE("cyclic trace identity Tr(A [B,A]) = 0") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix a = random_sym(rng, 6);
    const Matrix b = random_sym(rng, 6);
    CHECK(std::abs(frobenius_inner(a, commutator(b, a))) < 1e-12);
  }
}

TEST_CASE("sym_eig basics") {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, 1, 2;
  const Spectrum s = sym_eig(SymMatrix(d));
  CHECK(s.eigenvalues[0] == doctest::Approx(1));
  CHECK(s.eigenvalues[1] == doctest::Approx(2));
  CHECK(s.eigenvalues[2] == doctest::Approx(3));

  Matrix offdiag(2, 2);
  offdiag << 0, -1, -1, 0;
  const Spectrum s2 = sym_eig(SymMatrix(offdiag));
  CHECK(s2.eigenvalues[0] == doctest::Approx(-1));
  CHECK(s2.eigenvalues[1] == doctest::Approx(1));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(s2.eigenvectors(0, 0) == doctest::Approx(r));
  CHECK(s2.eigenvectors(1, 0) == doctest::Approx(r));
  CHECK(s2.eigenvectors(0, 1) == doctest::Approx(r));
  CHECK(s2.eigenvectors(1, 1) == doctest::Approx(-r));

  const Spectrum s3 = sym_eig(SymMatrix::Identity(3));
  CHECK(s3.eigenvalues.isApproxToConstant(1.0));
}

TEST_CASE("sym_eig reconstruction and sign convention") {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 10; ++rep) {
    const SymMatrix a{random_sym(rng, 7)};
    const Spectrum s = sym_eig(a);
    const Matrix rec =
        s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.transpose();
    CHECK((rec - a.mat()).norm() < 1e-10 * a.mat().norm() + 1e-12);
    for (Eigen::Index c = 0; c < s.eigenvectors.cols(); ++c) {
      Eigen::Index r = 0;
      while (std::abs(s.eigenvectors(r, c)) <= 1e-12) ++r;
      CHECK(s.eigenvectors(r, c) > 0);
    }
  }
}

TEST_CASE("expm_antisym") {
  CHECK((expm_antisym(AntiSymMatrix(Matrix::Zero(3, 3))).mat() -
         Matrix::Identity(3, 3))
            .norm() < 1e-14);

  Matrix quarter(2, 2);
  quarter << 0, -M_PI_2, M_PI_2, 0;
  Matrix expect(2, 2);
  expect << 0, -1, 1, 0;
  CHECK((expm_antisym(AntiSymMatrix(quarter)).mat() - expect).norm() < 1e-12);

  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const AntiSymMatrix a{random_antisym(rng, 6) * 5.0};
    const Matrix u = expm_antisym(a).mat();
    CHECK((u.transpose() * u - Matrix::Identity(6, 6)).norm() < 1e-12 * 6);
    const Matrix v = expm_antisym(AntiSymMatrix(-a.mat())).mat();
    CHECK((u * v - Matrix::Identity(6, 6)).norm() < 1e-11);
  }

  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  bad(1, 0) = -bad(0, 1);
  CHECK_THROWS(expm_antisym(AntiSymMatrix(bad)));
}

TEST_CASE("mcweeny_purify") {
  Matrix p = Matrix::Zero(3, 3);
  p.diagonal() << 1, 1, 0;
  const SymMatrix out = mcweeny_purify(SymMatrix(p), 2);
  CHECK((out.mat() - p).norm() == 0.0);

  // one-step scalar cubic check via a tight tolerance target
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 0.9, 0.1;
  const SymMatrix pur = mcweeny_purify(SymMatrix(d), 1, 1e-12);
  CHECK((pur.mat() * pur.mat() - pur.mat()).norm() <= 1e-12);
  CHECK(pur.mat().trace() == doctest::Approx(1.0).epsilon(1e-8));

  Matrix stuck = Matrix::Zero(2, 2);
  stuck.diagonal() << 0.5, 0.5;
  CHECK_THROWS(mcweeny_purify(SymMatrix(stuck), 1));

  // symmetry of the output is exact
  std::mt19937_64 rng(6);
  Matrix near = Matrix::Zero(4, 4);
  near.diagonal() << 0.97, 1.02, 0.03, -0.01;
  const Matrix q = expm_antisym(AntiSymMatrix(random_antisym(rng, 4))).mat();
  const SymMatrix res = mcweeny_purify(SymMatrix(q * near * q.transpose()), 2);
  CHECK((res.mat() - res.mat().transpose()).norm() == 0.0);
  CHECK((res.mat() * res.mat() - res.mat()).norm() <= 1e-12);
}

TEST_CASE("mcweeny_purify single cubic step value") {
  // scalar map 3x^2-2x^3: 0.9 -> 0.972, 0.1 -> 0.028; loose tol stops after
  // one sweep
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 0.9, 0.1;
  const double drift_after_one =
      std::hypot(0.972 * 0.972 - 0.972, 0.028 * 0.028 - 0.028);
  const SymMatrix one = mcweeny_purify(SymMatrix(d), 1, drift_after_one + 1e-12);
  CHECK(one(0, 0) == doctest::Approx(0.972).epsilon(1e-12));
  CHECK(one(1, 1) == doctest::Approx(0.028).epsilon(1e-10));
}

TEST_CASE("inverse_sqrt") {
  CHECK((inverse_sqrt(SymMatrix::Identity(3)).mat() - Matrix::Identity(3, 3))
            .norm() < 1e-13);

  Matrix s = Matrix::Zero(2, 2);
  s.diagonal() << 4, 1;
  const SymMatrix x = inverse_sqrt(SymMatrix(s));
  CHECK(x(0, 0) == doctest::Approx(0.5));
  CHECK(x(1, 1) == doctest::Approx(1.0));

  std::mt19937_64 rng(7);
  const Matrix a = random_sym(rng, 5);
  const Matrix spd = a * a.transpose() + 0.5 * Matrix::Identity(5, 5);
  const SymMatrix xi = inverse_sqrt(SymMatrix(spd));
  CHECK((xi.mat() * spd * xi.mat() - Matrix::Identity(5, 5)).norm() < 1e-10);

  Matrix neg = Matrix::Zero(2, 2);
  neg.diagonal() << 1, -2;
  CHECK_THROWS_WITH_AS(inverse_sqrt(SymMatrix(neg)),
                       doctest::Contains("-2"), std::invalid_argument);
}

TEST_CASE("type invariants") {
  Matrix skew(2, 2);
  skew << 0, 1, 2, 0;
  const SymMatrix sym(skew);
  CHECK(sym(0, 1) == sym(1, 0));

  const AntiSymMatrix anti(skew);
  CHECK(anti.mat()(0, 0) == 0.0);
  CHECK(anti.mat()(0, 1) == -anti.mat()(1, 0));

  Matrix not_orth(2, 2);
  not_orth << 1, 0, 0, 2;
  CHECK_THROWS_AS(OrthogonalMatrix{not_orth}, std::invalid_argument);
}
