#include "perturbation.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace trscond {

double PerturbationDirection::e_mat_norm() const {
  if (e_mat.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(e_mat, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

MarginReport easy_case_margins(const TrsProblem& problem, const SpectralInfo& spectral,
                               const Tolerances& tol) {
  const CaseDiagnostic diag = classify_case(problem, spectral, tol);
  if (!diag.easy) fail(ErrorCode::HardCaseInput, "margins require an easy-case instance");
  if (spectral.multiplicity_s >= spectral.dim())
    fail(ErrorCode::ZeroGap, "bottom cluster spans the spectrum; no gap to protect");

  const double gap = spectral.bottom_gap();
  const double norm_g = problem.g.norm();
  const double cosb = diag.cos_bottom;
  const double pinv = diag.pinv_norm;
  const double u2g = cosb * norm_g;  // ||U2 U2^T g||

  MarginReport r;
  r.gap = gap;
  r.cos_bottom = cosb;
  r.pinv_norm = pinv;
  r.eta1 = 0.5 * std::min(gap * (pinv - problem.delta) /
                              (1.5 * pinv + 1.0 + cosb * norm_g / gap),
                          gap);
  r.eta2 = 0.5 * std::min({u2g * gap / (4.0 * norm_g + gap),
                           norm_g * cosb / (2.0 * problem.delta), gap});
  r.eta_max = std::max(r.eta1, r.eta2);
  if (spectral.alpha_min() > 0.0) r.spd_margin = spectral.alpha_min();
  return r;
}

namespace {

Vector direction_vector(const TrsProblem& problem, const TrsSolution& sol,
                        const PerturbationDirection& dir) {
  return dir.apply_e(sol.x) + dir.evec(problem.dim());
}

void require_case(const SolvedTrs& solved, CaseLabel label, const char* what) {
  if (solved.sol.label != label) fail(ErrorCode::WrongCase, what);
}

}  // namespace

double lambda_derivative(const TrsProblem& problem, const SolvedTrs& solved,
                         const MFormulation& m, const PerturbationDirection& dir) {
  require_case(solved, CaseLabel::EasyBoundaryPositive,
               "lambda'(0) needs the positive-multiplier boundary case");
  const Vector v = direction_vector(problem, solved.sol, dir);
  return m.sign_gty2() * m.y1.norm() / (m.y1ty2 * problem.delta) * m.y2.dot(v);
}

Vector x_derivative(const TrsProblem& problem, const SolvedTrs& solved,
                    const MFormulation& m, const PerturbationDirection& dir) {
  require_case(solved, CaseLabel::EasyBoundaryPositive,
               "x'(0) needs the positive-multiplier boundary case");
  const Vector v = direction_vector(problem, solved.sol, dir);
  const Vector ainv_v = shifted_inverse_apply(solved.spectral, solved.sol.lambda, v);
  return -ainv_v + m.y2 * (m.y2.dot(v) / m.y1ty2);
}

Vector interior_derivative(const TrsProblem& problem, const SolvedTrs& solved,
                           const PerturbationDirection& dir) {
  require_case(solved, CaseLabel::EasyInterior, "interior derivative needs lambda* = 0, ||x*|| < delta");
  const Vector v = direction_vector(problem, solved.sol, dir);
  return -shifted_inverse_apply(solved.spectral, 0.0, v);
}

Differentiability boundary_zero_classify(const TrsProblem& problem, const SolvedTrs& solved,
                                         const PerturbationDirection& dir,
                                         const Tolerances& tol) {
  require_case(solved, CaseLabel::EasyBoundaryZero,
               "trichotomy applies to lambda* = 0 boundary solutions");
  const Vector& x = solved.sol.x;
  const Vector v = direction_vector(problem, solved.sol, dir);  // E x* + e
  const Vector ainv_v = shifted_inverse_apply(solved.spectral, 0.0, v);

  Differentiability d;
  d.t = x.dot(ainv_v);
  const double ainv_norm = 1.0 / solved.spectral.alpha_min();  // A > 0 here
  const double scale = 1e-12 * x.norm() * ainv_norm *
                       (dir.e_mat_norm() * x.norm() + dir.e_vec_norm());
  const double class_tol = std::max(scale, 1e-300);

  const Vector smooth = -ainv_v;  // -A^{-1}(E x* + e)
  if (std::abs(d.t) <= class_tol) {
    d.kind = DiffKind::Differentiable;
    d.left_lambda_prime = d.right_lambda_prime = 0.0;
    d.left_x_prime = d.right_x_prime = smooth;
    return d;
  }

  // boundary-side slopes from the rightmost eigenpair at lambda* = 0
  MFormulation m = build_m(problem, solved, tol);
  const double lam_slope =
      -m.y1.squaredNorm() * d.t / (m.y1ty2 * problem.delta * problem.delta);
  const Vector x_slope = -ainv_v + m.y2 * (m.y2.dot(v) / m.y1ty2);  // Eq. form at A* = A

  d.kind = DiffKind::NonDifferentiable;
  if (d.t > 0.0) {
    // radius shrinks to the right: interior-style on the right, boundary on the left
    d.right_lambda_prime = 0.0;
    d.right_x_prime = smooth;
    d.left_lambda_prime = lam_slope;
    d.left_x_prime = x_slope;
  } else {
    d.left_lambda_prime = 0.0;
    d.left_x_prime = smooth;
    d.right_lambda_prime = lam_slope;
    d.right_x_prime = x_slope;
  }
  return d;
}

void first_order_bounds(const TrsProblem& problem, const SolvedTrs& solved,
                        const MFormulation& m, const PerturbationDirection& dir,
                        double& lambda_coeff, double& x_coeff) {
  if (solved.sol.label != CaseLabel::EasyBoundaryPositive)
    fail(ErrorCode::WrongCase, "first-order bounds need the positive-multiplier boundary case");
  const double norm_e_mat = dir.e_mat_norm();
  const double norm_e_vec = dir.e_vec_norm();
  const double ratio = m.y1.norm() * m.y2.norm() / std::abs(m.y1ty2);
  lambda_coeff = ratio * std::max(1.0, 1.0 / problem.delta) * (norm_e_mat + norm_e_vec);

  const double astar_norm = solved.spectral.alpha_max() + solved.sol.lambda;
  const double sx = s_x(problem, solved);  // ||A*|| ||A*^{-1} - y2 y2^T/(y1^T y2)||
  x_coeff = sx * (norm_e_mat / astar_norm + norm_e_vec / problem.g.norm());
}

SensitivityReport sensitivity(const TrsProblem& problem, const SolvedTrs& solved,
                              const PerturbationDirection& dir, const Tolerances& tol) {
  SensitivityReport r;
  switch (solved.sol.label) {
    case CaseLabel::EasyInterior:
      r.lambda_prime = 0.0;
      r.x_prime = interior_derivative(problem, solved, dir);
      return r;
    case CaseLabel::EasyBoundaryPositive: {
      MFormulation m = build_m(problem, solved, tol);
      r.lambda_prime = lambda_derivative(problem, solved, m, dir);
      r.x_prime = x_derivative(problem, solved, m, dir);
      first_order_bounds(problem, solved, m, dir, r.lambda_bound_coeff, r.x_bound_coeff);
      return r;
    }
    case CaseLabel::EasyBoundaryZero: {
      Differentiability d = boundary_zero_classify(problem, solved, dir, tol);
      r.boundary_zero = d;
      if (d.kind == DiffKind::Differentiable) {
        r.lambda_prime = 0.0;
        r.x_prime = d.right_x_prime;
      }
      return r;
    }
    case CaseLabel::HardCase:
      fail(ErrorCode::WrongCase, "sensitivity analysis at a hard-case point is out of scope");
  }
  fail(ErrorCode::Internal, "unreachable");
}

double wedin_bound(const Matrix& b_mat, const Matrix& bt_mat, const Vector& b,
                   const Vector& bt) {
  if (b_mat.rows() != bt_mat.rows() || b_mat.cols() != bt_mat.cols() ||
      b.size() != b_mat.rows() || bt.size() != bt_mat.rows())
    fail(ErrorCode::InvalidArgument, "wedin_bound shape mismatch");

  Eigen::JacobiSVD<Matrix> svd(b_mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::JacobiSVD<Matrix> svdt(bt_mat);
  const Vector& sv = svd.singularValues();
  const Vector& svt = svdt.singularValues();
  const double smax = sv(0);
  auto numerical_rank = [](const Vector& s, Index rows, Index cols) {
    const double cut =
        double(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() * s(0);
    Index r = 0;
    while (r < s.size() && s(r) > cut) ++r;
    return r;
  };
  const Index rank = numerical_rank(sv, b_mat.rows(), b_mat.cols());
  if (rank != numerical_rank(svt, bt_mat.rows(), bt_mat.cols()))
    fail(ErrorCode::RankMismatch, "rank(B) differs from rank(B~)");

  const double smin = sv(rank - 1);
  const double kappa = smax / smin;
  const double eps_rel = (b_mat - bt_mat).norm() > 0.0
                             ? Eigen::JacobiSVD<Matrix>(b_mat - bt_mat).singularValues()(0) / smax
                             : 0.0;
  if (kappa * eps_rel >= 1.0)
    fail(ErrorCode::ContractionViolated, "kappa(B) * ||B - B~|| / ||B|| must stay below 1");

  // assemble the displayed bound term by term
  Vector utb = svd.matrixU().transpose() * b;
  Vector pinv_b = Vector::Zero(b_mat.cols());
  Vector bbt_pinv_b_coeff = Vector::Zero(utb.size());
  for (Index i = 0; i < rank; ++i) {
    pinv_b += svd.matrixV().col(i) * (utb(i) / sv(i));
    bbt_pinv_b_coeff(i) = utb(i) / (sv(i) * sv(i));
  }
  const double norm_pinv_b = pinv_b.norm();
  Vector proj_residual = b;  // (I - B B^+) b
  for (Index i = 0; i < rank; ++i) proj_residual -= svd.matrixU().col(i) * utb(i);
  const double norm_bbt_pinv_b = (svd.matrixU() * bbt_pinv_b_coeff).norm();

  return kappa / ((1.0 - eps_rel) * smax) *
             (eps_rel * norm_pinv_b * smax + (b - bt).norm() +
              eps_rel * kappa * proj_residual.norm()) +
         eps_rel * smax * norm_bbt_pinv_b;
}

TrsProblem perturbed_problem(const TrsProblem& problem, const PerturbationDirection& dir,
                             double eps) {
  const Index n = problem.dim();
  Vector g = problem.g + eps * dir.evec(n);
  if (dir.e_mat.size() == 0) return TrsProblem(problem.a, std::move(g), problem.delta);
  if (problem.a.rep() == Rep::Diagonal && dir.e_mat.isDiagonal(0.0)) {
    Vector d = problem.a.diag() + eps * dir.e_mat.diagonal();
    return TrsProblem(SymOperator::diagonal(std::move(d)), std::move(g), problem.delta);
  }
  Matrix a = problem.a.rep() == Rep::Dense
                 ? problem.a.dense_matrix()
                 : Matrix(problem.a.diag().asDiagonal());
  a += eps * dir.e_mat;
  return TrsProblem(SymOperator::dense(std::move(a)), std::move(g), problem.delta);
}

FdDerivatives fd_oracle(const TrsProblem& problem, const PerturbationDirection& dir,
                        const std::vector<double>& eps_list, FdSide side,
                        const Tolerances& tol) {
  if (eps_list.empty()) fail(ErrorCode::InvalidArgument, "fd_oracle needs at least one eps");
  FdDerivatives out;
  const SolvedTrs base = solve_dense(problem, tol);

  for (double eps : eps_list) {
    if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "fd eps must be positive");
    FdSample s;
    s.eps = eps;
    auto resolve = [&](double signed_eps) {
      return solve_dense(perturbed_problem(problem, dir, signed_eps), tol);
    };
    switch (side) {
      case FdSide::Central: {
        const SolvedTrs plus = resolve(eps), minus = resolve(-eps);
        s.lambda_quotient = (plus.sol.lambda - minus.sol.lambda) / (2.0 * eps);
        s.x_quotient = (plus.sol.x - minus.sol.x) / (2.0 * eps);
        break;
      }
      case FdSide::Left: {
        const SolvedTrs minus = resolve(-eps);
        s.lambda_quotient = (base.sol.lambda - minus.sol.lambda) / eps;
        s.x_quotient = (base.sol.x - minus.sol.x) / eps;
        break;
      }
      case FdSide::Right: {
        const SolvedTrs plus = resolve(eps);
        s.lambda_quotient = (plus.sol.lambda - base.sol.lambda) / eps;
        s.x_quotient = (plus.sol.x - base.sol.x) / eps;
        break;
      }
    }
    s.x_slope = s.x_quotient.norm();
    out.samples.push_back(std::move(s));
  }

  // two-level Richardson on the two finest samples; r is the actual ratio,
  // order 2 for central differences and 1 for one-sided ones
  std::vector<const FdSample*> sorted;
  for (const auto& s : out.samples) sorted.push_back(&s);
  std::sort(sorted.begin(), sorted.end(),
            [](const FdSample* a, const FdSample* b) { return a->eps < b->eps; });
  const FdSample& fine = *sorted[0];
  if (sorted.size() == 1) {
    out.lambda_extrapolated = fine.lambda_quotient;
    out.x_extrapolated = fine.x_quotient;
    out.lambda_error_estimate = std::abs(fine.lambda_quotient);
    return out;
  }
  const FdSample& coarse = *sorted[1];
  const double r = coarse.eps / fine.eps;
  const double p = side == FdSide::Central ? 2.0 : 1.0;
  const double rp = std::pow(r, p);
  out.lambda_extrapolated =
      (rp * fine.lambda_quotient - coarse.lambda_quotient) / (rp - 1.0);
  out.x_extrapolated = (rp * fine.x_quotient - coarse.x_quotient) / (rp - 1.0);
  out.lambda_error_estimate = std::abs(out.lambda_extrapolated - fine.lambda_quotient);
  return out;
}

}  // namespace trscond
