#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "core/linalg.hpp"
#include "test_util.hpp"

using namespace trscond;
namespace tu = trscond::testutil;

TEST_CASE("sym_eig on the nearly-hard 2x2 instance") {
  const double gamma = 1e-3;
  auto info = sym_eig(SymOperator::diagonal((Vector(2) << 1.0, -1.0 + gamma).finished()));
  CHECK(info.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(info.eigenvalues(1) == doctest::Approx(-0.999));
  CHECK(info.multiplicity_s == 1);
  CHECK(info.bottom_gap() == doctest::Approx(2.0 - gamma));
}

TEST_CASE("sym_eig groups a full bottom cluster") {
  auto info = sym_eig(SymOperator::dense(Matrix::Identity(4, 4)));
  CHECK(info.multiplicity_s == 4);
  for (int i = 0; i < 4; ++i) CHECK(info.eigenvalues(i) == doctest::Approx(1.0));
  Matrix u2 = info.bottom_basis();
  CHECK((u2.transpose() * u2 - Matrix::Identity(4, 4)).norm() <= 1e-12);
}

TEST_CASE("sym_eig matches the Sturm-sequence bisection oracle") {
  auto eng = tu::rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix a = tu::random_symmetric(eng, 6);
    auto info = sym_eig(SymOperator::dense(a));
    Vector oracle = tu::sturm_bisection_eigenvalues(a);  // ascending
    for (Index i = 0; i < 6; ++i)
      CHECK(info.eigenvalues(5 - i) == doctest::Approx(oracle(i)).epsilon(1e-10));
  }
}

TEST_CASE("sym_eig rejects matrix-free operators") {
  auto op = SymOperator::matrix_free(3, [](const Vector& v, Vector& out) { out = 2.0 * v; });
  CHECK_THROWS_WITH_AS(sym_eig(op), doctest::Contains("dense or diagonal"), Error);
}

TEST_CASE("sym_eig invariants: ordering, orthonormal bottom basis, reconstruction") {
  auto eng = tu::rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = tu::random_symmetric(eng, 12);
    auto info = sym_eig(SymOperator::dense(a));
    for (Index i = 1; i < 12; ++i) CHECK(info.eigenvalues(i - 1) >= info.eigenvalues(i));
    Matrix u2 = info.bottom_basis();
    const Index s = info.multiplicity_s;
    CHECK((u2.transpose() * u2 - Matrix::Identity(s, s)).norm() <= 1e-12);
    Matrix lam2 = info.eigenvalues.tail(s).asDiagonal();
    CHECK((a * u2 - u2 * lam2).norm() <= 1e-10 * std::max(1.0, info.norm));
  }
}

TEST_CASE("Weyl bound holds for sorted spectra of random pairs") {
  auto eng = tu::rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    Matrix a = tu::random_symmetric(eng, 8);
    Matrix f = tu::random_symmetric(eng, 8, tu::uniform(eng, 0.01, 2.0));
    auto ia = sym_eig(SymOperator::dense(a));
    auto iaf = sym_eig(SymOperator::dense(a + f));
    Eigen::SelfAdjointEigenSolver<Matrix> ef(f, Eigen::EigenvaluesOnly);
    const double fnorm = ef.eigenvalues().cwiseAbs().maxCoeff();
    const double dev = (ia.eigenvalues - iaf.eigenvalues).cwiseAbs().maxCoeff();
    CHECK(dev <= fnorm * (1.0 + 1e-12) + 1e-14);
  }
}

TEST_CASE("linearity of the apply callback on random probes") {
  auto eng = tu::rng(17);
  Matrix a = tu::random_symmetric(eng, 9);
  auto op = SymOperator::matrix_free(9, [a](const Vector& v, Vector& out) { out = a * v; });
  for (int trial = 0; trial < 8; ++trial) {
    Vector u = tu::random_vector(eng, 9), v = tu::random_vector(eng, 9);
    const double al = tu::uniform(eng, -2, 2), be = tu::uniform(eng, -2, 2);
    Vector lhs = op.apply(al * u + be * v);
    Vector rhs = al * op.apply(u) + be * op.apply(v);
    CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
  }
}

TEST_CASE("pinv_apply annihilates the null component") {
  Matrix m = (Vector(2) << 2.0, 0.0).finished().asDiagonal();
  Vector r = pinv_apply(m, (Vector(2) << 4.0, 5.0).finished());
  CHECK(r(0) == doctest::Approx(2.0));
  CHECK(r(1) == doctest::Approx(0.0));
}

TEST_CASE("pinv_apply is the plain inverse on nonsingular input") {
  Matrix m = (Vector(2) << 3.0, 1.0).finished().asDiagonal();
  Vector r = pinv_apply(m, (Vector(2) << 3.0, 1.0).finished());
  CHECK((r - Vector::Ones(2)).norm() <= 1e-14);
}

TEST_CASE("pinv_apply matches the Tikhonov limit on a rank-2 PSD matrix") {
  auto eng = tu::rng(19);
  // rank-2 PSD with nonzero eigenvalues kept near 1 so the mu -> 0 limit
  // converges well inside the tolerance
  Matrix q = tu::random_orthogonal(eng, 3);
  Vector ev = (Vector(3) << tu::uniform(eng, 0.8, 1.5), tu::uniform(eng, 0.5, 0.8), 0.0)
                  .finished();
  Matrix m = q * ev.asDiagonal() * q.transpose();
  Vector rhs = tu::random_vector(eng, 3);
  Vector got = pinv_apply(m, rhs);
  // T(mu) = (M^2 + mu I)^{-1} M rhs is linear in mu near 0; one Richardson
  // level at a solver-friendly mu reaches the limit to O(mu^2)
  auto tik = [&](double mu) -> Vector {
    return (m * m + mu * Matrix::Identity(3, 3)).ldlt().solve(m * rhs);
  };
  Vector limit = 2.0 * tik(5e-6) - tik(1e-5);
  CHECK((got - limit).norm() <= 1e-8 * std::max(1.0, limit.norm()));
}

TEST_CASE("pinv_apply equals the eigen-reconstruction minimum-norm solution") {
  auto eng = tu::rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 5;
    Vector ev(n);
    ev << 0.0, 0.0, tu::uniform(eng, 0.5, 2.0), tu::uniform(eng, -3.0, -1.0),
        tu::uniform(eng, 2.0, 4.0);
    Matrix q = tu::random_orthogonal(eng, n);
    Matrix m = q * ev.asDiagonal() * q.transpose();
    Vector rhs = tu::random_vector(eng, n);
    Vector expect = Vector::Zero(n);
    for (Index i = 0; i < n; ++i)
      if (std::abs(ev(i)) > 1e-12) expect += q.col(i) * (q.col(i).dot(rhs) / ev(i));
    CHECK((pinv_apply(m, rhs) - expect).norm() <= 1e-10 * std::max(1.0, expect.norm()));
  }
}

TEST_CASE("rank-one downdate extreme eigenvalue matches dense eig") {
  auto eng = tu::rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 7;
    Vector d = tu::random_vector(eng, n, 2.0);
    Vector v = tu::random_vector(eng, n);
    if (trial % 3 == 0) v(2) = 0.0;  // force deflation
    const double rho = tu::uniform(eng, 0.0, 1.5);
    Matrix w = Matrix(d.asDiagonal()) - rho * v * v.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(w, Eigen::EigenvaluesOnly);
    const double expect = es.eigenvalues()(n - 1);
    CHECK(dpr1_downdate_max_eigenvalue(d, v, rho) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("tridiagonal eigensolver agrees with the dense path") {
  auto eng = tu::rng(31);
  const Index k = 9;
  Vector d = tu::random_vector(eng, k), e = tu::random_vector(eng, k - 1);
  Matrix t = Matrix::Zero(k, k);
  t.diagonal() = d;
  t.diagonal(1) = e;
  t.diagonal(-1) = e;
  Vector vals;
  Matrix vecs;
  tridiag_eig(d, e, vals, &vecs);
  Eigen::SelfAdjointEigenSolver<Matrix> es(t);
  CHECK((vals - es.eigenvalues()).norm() <= 1e-12);
  CHECK((t * vecs - vecs * vals.asDiagonal()).norm() <= 1e-12 * std::max(1.0, t.norm()));
}
