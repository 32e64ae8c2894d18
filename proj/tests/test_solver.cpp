#include "doctest.h"

#include "core/solver.hpp"
#include "test_util.hpp"

using namespace trscond;
namespace tu = trscond::testutil;

namespace {

TrsProblem example1(double gamma) {
  return TrsProblem(
      SymOperator::diagonal((Vector(2) << 1.0, -1.0 + gamma).finished()),
      (Vector(2) << 1.0, gamma).finished(), std::sqrt(5.0) / 2.0);
}

TrsProblem boundary_zero_example() {
  // A = diag(2,1), g = (1,1), delta = sqrt(5)/2: x* = -A^{-1}g on the boundary
  return TrsProblem(SymOperator::diagonal((Vector(2) << 2.0, 1.0).finished()),
                    Vector::Ones(2), std::sqrt(5.0) / 2.0);
}

}  // namespace

TEST_CASE("secular value on the boundary-zero instance") {
  auto p = boundary_zero_example();
  auto sp = sym_eig(p.a);
  CHECK(secular_value(p, sp, 0.0) == doctest::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("secular value collapses to the single-coefficient pole term") {
  Vector d = (Vector(3) << 3.0, 1.0, 0.5).finished();
  Vector g = Vector::Zero(3);
  g(0) = 2.0;  // aligned with the top eigenvector only
  TrsProblem p(SymOperator::diagonal(d), g, 1.0);
  auto sp = sym_eig(p.a);
  const double lam = 0.7;
  CHECK(secular_value(p, sp, lam) == doctest::Approx(4.0 / ((3.0 + lam) * (3.0 + lam))));
}

TEST_CASE("secular value matches a dense linear solve") {
  auto eng = tu::rng(51);
  Matrix a = tu::random_symmetric(eng, 5);
  Vector g = tu::random_vector(eng, 5);
  TrsProblem p(SymOperator::dense(a), g, 1.0);
  auto sp = sym_eig(p.a);
  const double lam = sp.alpha_min() < 0 ? -sp.alpha_min() + 0.7 : 0.7;
  Vector x = (a + lam * Matrix::Identity(5, 5)).ldlt().solve(g);
  CHECK(secular_value(p, sp, lam) ==
        doctest::Approx(x.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("secular value refuses shifts at the pole") {
  auto p = example1(1e-3);
  auto sp = sym_eig(p.a);
  CHECK_THROWS_AS(secular_value(p, sp, -sp.alpha_min()), Error);
}

TEST_CASE("secular value is strictly decreasing beyond the pole") {
  auto eng = tu::rng(53);
  Matrix a = tu::random_symmetric(eng, 6);
  Vector g = tu::random_vector(eng, 6);
  TrsProblem p(SymOperator::dense(a), g, 1.0);
  auto sp = sym_eig(p.a);
  const double lo = -sp.alpha_min() + 0.05;
  double prev = secular_value(p, sp, lo);
  for (int i = 1; i <= 40; ++i) {
    const double val = secular_value(p, sp, lo + 0.25 * i);
    CHECK(val < prev);
    prev = val;
  }
}

TEST_CASE("Example 1 solves to the closed-form boundary solution") {
  // storing -1+gamma rounds by up to 2^-54, which is ~6e-11 relative to the
  // gamma-sized gap once gamma reaches 1e-6; residual checks scale with that
  for (double gamma : {1e-3, 1e-6, 1e-8}) {
    CAPTURE(gamma);
    const double rep_slack = std::max(1e-13, 6e-17 / gamma);
    auto solved = solve_dense(example1(gamma));
    CHECK(solved.sol.label == CaseLabel::EasyBoundaryPositive);
    CHECK(solved.sol.lambda == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(solved.sol.x(0) == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(solved.sol.x(1) == doctest::Approx(-1.0).epsilon(rep_slack));
    CHECK(solved.sol.hard_gap == doctest::Approx(gamma).epsilon(rep_slack));
    CHECK(solved.sol.kkt.stationarity <= 5e-16);
    CHECK(solved.sol.kkt.complementarity <= 5e-14 + rep_slack);
    CHECK(std::abs(solved.sol.kkt.feasibility) <= rep_slack * solved.sol.x.norm());
  }
  // the nearly-hard flag trips below the 1e-6 * max(1, ||A||) threshold
  CHECK(solve_dense(example1(1e-8)).sol.nearly_hard);
  CHECK_FALSE(solve_dense(example1(1e-3)).sol.nearly_hard);
}

TEST_CASE("boundary solution with a zero multiplier is recognized") {
  auto solved = solve_dense(boundary_zero_example());
  CHECK(solved.sol.label == CaseLabel::EasyBoundaryZero);
  CHECK(solved.sol.lambda == 0.0);
  CHECK(solved.sol.x(0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(solved.sol.x(1) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(solved.sol.kkt.complementarity == 0.0);
}

TEST_CASE("symmetry pins the isotropic boundary solution") {
  TrsProblem p(SymOperator::dense(Matrix::Identity(3, 3)),
               (Vector(3) << 0.0, 0.0, -2.0).finished(), 1.0);
  auto solved = solve_dense(p);
  CHECK(solved.sol.label == CaseLabel::EasyBoundaryPositive);
  CHECK(solved.sol.lambda == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(solved.sol.x(2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(solved.sol.x(0)) <= 1e-15);
}

TEST_CASE("interior instances keep a zero multiplier") {
  TrsProblem p(SymOperator::diagonal((Vector(2) << 2.0, 1.0).finished()),
               Vector::Ones(2), 3.0);
  auto solved = solve_dense(p);
  CHECK(solved.sol.label == CaseLabel::EasyInterior);
  CHECK(solved.sol.lambda == 0.0);
  CHECK(solved.sol.kkt.complementarity == 0.0);
  CHECK(solved.sol.x.norm() < 3.0);
}

TEST_CASE("hard-case instances take the pseudoinverse step plus a bottom component") {
  // g orthogonal to the bottom eigenvector, pseudoinverse step inside the ball
  Vector d = (Vector(3) << 2.0, 1.0, -1.0).finished();
  Vector g = (Vector(3) << 0.9, 0.6, 0.0).finished();
  const double delta = 2.0;
  TrsProblem p(SymOperator::diagonal(d), g, delta);
  auto solved = solve_dense(p);
  CHECK(solved.sol.label == CaseLabel::HardCase);
  CHECK(solved.sol.lambda == doctest::Approx(1.0));
  CHECK(solved.sol.x.norm() == doctest::Approx(delta).epsilon(1e-12));
  CHECK(solved.sol.kkt.stationarity <= 1e-12);
  // tau >= 0 on the bottom direction
  CHECK(solved.sol.x(2) >= 0.0);
}

TEST_CASE("degenerate gradient is rejected on construction") {
  CHECK_THROWS_AS(TrsProblem(SymOperator::diagonal(Vector::Ones(2)), Vector::Zero(2), 1.0),
                  Error);
}

TEST_CASE("verify_kkt sees an injected error at its magnitude") {
  auto eng = tu::rng(57);
  auto p = tu::random_boundary_positive(eng, 6);
  auto solved = solve_dense(p);
  Vector noise = tu::random_vector(eng, 6).normalized() * 1e-6;
  auto res = verify_kkt(p, solved.spectral, solved.sol.x + noise, solved.sol.lambda);
  CHECK(res.stationarity * p.g.norm() >= 1e-8);
  CHECK(res.stationarity * p.g.norm() <= 1e-4);
}

TEST_CASE("solved instances beat random feasible points") {
  auto eng = tu::rng(59);
  for (int trial = 0; trial < 4; ++trial) {
    const Index n = 2 + trial;
    Matrix a = tu::random_symmetric(eng, n);
    Vector g = tu::random_vector(eng, n);
    TrsProblem p(SymOperator::dense(a), g, tu::uniform(eng, 0.3, 2.0));
    auto solved = solve_dense(p);
    const double fstar = p.objective(solved.sol.x);
    for (int probe = 0; probe < 10000; ++probe) {
      Vector y = tu::random_vector(eng, n);
      y *= tu::uniform(eng, 0.0, 1.0) * p.delta / y.norm();
      CHECK(fstar <= p.objective(y) + 1e-10);
    }
  }
}

TEST_CASE("case diagnostics separate easy and hard instances") {
  const double gamma = 1e-3;
  auto p = example1(gamma);
  auto sp = sym_eig(p.a);
  auto diag = classify_case(p, sp);
  CHECK(diag.easy);
  CHECK(diag.cos_bottom == doctest::Approx(gamma / p.g.norm()));
  CHECK(diag.gap == doctest::Approx(2.0 - gamma));

  Vector d = (Vector(3) << 2.0, 1.0, -1.0).finished();
  TrsProblem hard(SymOperator::diagonal(d), (Vector(3) << 0.9, 0.6, 0.0).finished(), 2.0);
  auto hd = classify_case(hard, sym_eig(hard.a));
  CHECK_FALSE(hd.easy);
  CHECK(hd.pinv_norm <= hard.delta);
}

TEST_CASE("M formulation reproduces Example 1 structure") {
  const double gamma = 1e-3;
  auto p = example1(gamma);
  auto solved = solve_dense(p);
  auto m = build_m(p, solved);
  CHECK(m.lambda_r == doctest::Approx(1.0));
  CHECK(m.y1ty2 > 0.0);
  CHECK(m.gty2 < 0.0);
  // y1 parallel to x*, y2 parallel to -(1/4, 1/gamma)
  Vector y1_dir = m.y1 / m.y1.norm();
  Vector x_dir = solved.sol.x / solved.sol.x.norm();
  CHECK((y1_dir - x_dir).norm() <= 1e-12);
  Vector y2_expect = -(Vector(2) << 0.25, 1.0 / gamma).finished();
  CHECK((m.y2 / m.y2.norm() - y2_expect / y2_expect.norm()).norm() <= 1e-12);
  CHECK(m.residual <= 1e-8 * m.m_norm);
  // y1 = (A + lambda I) y2
  Vector lhs = p.a.apply(m.y2) + m.lambda_r * m.y2;
  CHECK((lhs - m.y1).norm() <= 1e-8 * std::max(1.0, m.y1.norm()));
}

TEST_CASE("M formulation on the isotropic instance has unit residual scale") {
  TrsProblem p(SymOperator::dense(Matrix::Identity(2, 2)),
               (Vector(2) << 0.0, -2.0).finished(), 1.0);
  auto solved = solve_dense(p);
  auto m = build_m(p, solved);
  CHECK(m.lambda_r == doctest::Approx(1.0));
  CHECK(m.residual <= 1e-12 * m.m_norm);
}

TEST_CASE("build_m rejects interior solutions") {
  TrsProblem p(SymOperator::diagonal((Vector(2) << 2.0, 1.0).finished()),
               Vector::Ones(2), 3.0);
  auto solved = solve_dense(p);
  CHECK_THROWS_AS(build_m(p, solved), Error);
}

TEST_CASE("determinant factorization confirms rightmostness on the real axis") {
  auto eng = tu::rng(61);
  auto p = tu::random_boundary_positive(eng, 4);
  auto solved = solve_dense(p);
  auto m = build_m(p, solved);
  const Vector& alpha = solved.spectral.eigenvalues;
  Vector c = solved.spectral.to_eigenbasis(p.g);
  for (int probe = 1; probe <= 200; ++probe) {
    const double mu = m.lambda_r + probe * 0.05;
    // det(M - mu I) = det(A + mu I)^2 (1 - g^T (A+mu I)^{-2} g / delta^2)
    double det_factor = 1.0;
    double secular = 0.0;
    for (Index i = 0; i < 4; ++i) {
      const double di = alpha(i) + mu;
      det_factor *= di * di;
      secular += c(i) * c(i) / (di * di);
    }
    const double det = det_factor * (1.0 - secular / (p.delta * p.delta));
    CHECK(det != 0.0);
    CHECK(det > 0.0);  // no sign change to the right of lambda_R
  }
}

TEST_CASE("multiplier equals the rightmost eigenvalue implied by the eigenpair") {
  auto eng = tu::rng(67);
  for (int trial = 0; trial < 6; ++trial) {
    auto p = tu::random_boundary_positive(eng, 5);
    auto solved = solve_dense(p);
    auto m = build_m(p, solved);
    // Rayleigh quotient of M at (y1; y2) against the left eigenvector w
    const Vector my1 = -p.a.apply(m.y1) + p.g * (m.gty2 / (p.delta * p.delta));
    const Vector my2 = m.y1 - p.a.apply(m.y2);
    const double wy = 2.0 * m.y1ty2;
    const double rayleigh = (m.y2.dot(my1) + m.y1.dot(my2)) / wy;
    CHECK(rayleigh == doctest::Approx(solved.sol.lambda).epsilon(1e-10));
  }
}

TEST_CASE("boundary identity holds for positive multipliers") {
  auto eng = tu::rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = tu::random_boundary_positive(eng, 7);
    auto solved = solve_dense(p);
    REQUIRE(solved.sol.label == CaseLabel::EasyBoundaryPositive);
    CHECK(std::abs(solved.sol.x.norm() - p.delta) <= 1e-13 * p.delta);
    CHECK(solved.sol.lambda > 0.0);
  }
}

TEST_CASE("build_m refuses hard-case solutions") {
  Vector d = (Vector(3) << 2.0, 1.0, -1.0).finished();
  TrsProblem p(SymOperator::diagonal(d), (Vector(3) << 0.9, 0.6, 0.0).finished(), 2.0);
  auto solved = solve_dense(p);
  REQUIRE(solved.sol.label == CaseLabel::HardCase);
  CHECK_THROWS_AS(build_m(p, solved), Error);
}
