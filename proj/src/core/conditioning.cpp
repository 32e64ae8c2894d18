#include "conditioning.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace trscond {

namespace {

void require_easy_boundary(const SolvedTrs& solved) {
  const CaseLabel label = solved.sol.label;
  if (label != CaseLabel::EasyBoundaryPositive && label != CaseLabel::EasyBoundaryZero)
    fail(ErrorCode::WrongCase, "condition numbers are defined on the easy boundary");
}

}  // namespace

double s_lambda(const TrsProblem& problem, const SolvedTrs& solved) {
  require_easy_boundary(solved);
  const Vector v = shifted_inverse_apply(solved.spectral, solved.sol.lambda, solved.sol.x);
  const double beta = solved.sol.x.dot(v);
  return v.norm() / beta * std::max(1.0, problem.delta);
}

double cond_lambda(const MFormulation& m) {
  if (m.y1ty2 == 0.0) fail(ErrorCode::HardCaseEigvec, "y1^T y2 vanishes");
  return 1.0 / (2.0 * std::abs(m.y1ty2));
}

double projected_second_eigenvalue(const TrsProblem& problem, const SolvedTrs& solved) {
  require_easy_boundary(solved);
  if (problem.dim() < 2)
    fail(ErrorCode::InvalidArgument, "projected spectrum needs n >= 2");
  const SpectralInfo& sp = solved.spectral;
  const double lambda = solved.sol.lambda;
  const double delta = problem.delta;

  if (sp.basis) {
    const Matrix& a = problem.a.dense_matrix();
    Matrix astar = a + lambda * Matrix::Identity(a.rows(), a.cols());
    Matrix p = Matrix::Identity(a.rows(), a.cols()) -
               solved.sol.x * solved.sol.x.transpose() / (delta * delta);
    Matrix pap = p * astar * p;
    pap = 0.5 * (pap + pap.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(pap);
    if (es.info() != Eigen::Success)
      fail(ErrorCode::NonConvergence, "projected eigensolver did not converge");
    return es.eigenvalues()(1);
  }

  // diagonal fast path: ||(P A* P)^+|| equals the top eigenvalue of
  // A*^{-1} - v v^T / beta (same matrix through the projected-pseudoinverse
  // identity), a rank-one downdate of a diagonal matrix
  Vector c = sp.to_eigenbasis(solved.sol.x);
  Vector dstar = sp.eigenvalues.array() + lambda;
  Vector v = c.cwiseQuotient(dstar);
  const double beta = c.dot(v);
  const double mu = dpr1_downdate_max_eigenvalue(dstar.cwiseInverse(), v, 1.0 / beta);
  return 1.0 / mu;
}

double s_x(const TrsProblem& problem, const SolvedTrs& solved) {
  const double astar_norm = solved.spectral.alpha_max() + solved.sol.lambda;
  return astar_norm / projected_second_eigenvalue(problem, solved);
}

ConditionReport condition_report(const TrsProblem& problem, const SolvedTrs& solved,
                                 const MFormulation* m) {
  if (solved.sol.label == CaseLabel::EasyInterior) {
    ConditionReport r;
    r.classical_only = true;
    r.kappa_astar = solved.spectral.alpha_max() / solved.spectral.alpha_min();
    const double nan = std::nan("");
    r.s_lambda = r.s_x = r.cond_lambda = nan;
    r.s_lambda_bounds = {nan, nan};
    r.s_x_bounds = {nan, nan};
    return r;
  }
  require_easy_boundary(solved);
  const SpectralInfo& sp = solved.spectral;
  const double lambda = solved.sol.lambda;
  const double delta = problem.delta;
  const Index n = sp.dim();

  ConditionReport r;
  r.s_lambda = s_lambda(problem, solved);
  r.s_x = s_x(problem, solved);
  r.kappa_astar = (sp.alpha_max() + lambda) / (sp.alpha_min() + lambda);
  const double m1d = std::max(1.0, 1.0 / delta);
  r.s_lambda_bounds = {m1d, std::sqrt(r.kappa_astar) * m1d};
  r.s_x_bounds = {(sp.alpha_max() + lambda) / (sp.eigenvalues(n - 2) + lambda),
                  r.kappa_astar};
  if (m) {
    r.cond_lambda = cond_lambda(*m);
  } else {
    MFormulation built = build_m(problem, solved);
    r.cond_lambda = cond_lambda(built);
  }
  return r;
}

Matrix rank_one_pinv_update(const Matrix& w, const Vector& c, const Vector& d,
                            double check_tol) {
  if (w.rows() != w.cols() || c.size() != w.rows() || d.size() != w.rows())
    fail(ErrorCode::InvalidArgument, "rank_one_pinv_update shape mismatch");
  Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double cut = double(w.rows()) * std::numeric_limits<double>::epsilon() * smax;
  Vector inv = sv;
  for (Index i = 0; i < inv.size(); ++i) inv(i) = sv(i) > cut ? 1.0 / sv(i) : 0.0;
  Matrix pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();

  const Vector f = pinv * c;              // W^+ c
  const Vector h = pinv.transpose() * d;  // (W^+)^T d
  const double cscale = std::max(1.0, c.norm());
  const double dscale = std::max(1.0, d.norm());
  if ((w * f - c).norm() > check_tol * cscale)
    fail(ErrorCode::PreconditionViolated, "c is not in range(W)");
  if ((w.transpose() * h - d).norm() > check_tol * dscale)
    fail(ErrorCode::PreconditionViolated, "d is not in range(W^T)");
  const double unit = 1.0 + c.dot(pinv * d);
  if (std::abs(unit) > check_tol * std::max(1.0, c.norm() * d.norm() * pinv.norm()))
    fail(ErrorCode::PreconditionViolated, "1 + c^T W^+ d does not vanish");

  const double f2 = f.squaredNorm();
  const double h2 = h.squaredNorm();
  Matrix update = pinv;
  update -= f * (f.transpose() * pinv) / f2;
  update -= (pinv * h) * h.transpose() / h2;
  update += f * (f.transpose() * pinv * h) * h.transpose() / (f2 * h2);
  return update;
}

}  // namespace trscond
