#include "solver.hpp"

#include <cmath>
#include <limits>

namespace trscond {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double xnorm_from_coeffs(const Vector& c, const Vector& alpha, double lambda) {
  double sum = 0.0;
  for (Index i = 0; i < c.size(); ++i) {
    const double r = c(i) / (alpha(i) + lambda);
    sum += r * r;
  }
  return std::sqrt(sum);
}

// d ||x(lambda)|| / d lambda = -x^T (A+lambda)^{-1} x / ||x||
double xnorm_derivative(const Vector& c, const Vector& alpha, double lambda,
                        double xnorm) {
  double sum = 0.0;
  for (Index i = 0; i < c.size(); ++i) {
    const double d = alpha(i) + lambda;
    const double r = c(i) / d;
    sum += r * r / d;
  }
  return -sum / xnorm;
}

}  // namespace

double secular_value(const TrsProblem& problem, const SpectralInfo& spectral,
                     double lambda, const Tolerances& tol) {
  const double guard = tol.pole_tol * std::max(1.0, spectral.norm);
  if (lambda + spectral.alpha_min() <= guard)
    fail(ErrorCode::PoleProximity, "shift too close to -alpha_n");
  Vector c = spectral.to_eigenbasis(problem.g);
  const double nx = xnorm_from_coeffs(c, spectral.eigenvalues, lambda);
  return nx * nx;
}

Vector shifted_inverse_apply(const SpectralInfo& spectral, double lambda,
                             const Vector& v) {
  Vector c = spectral.to_eigenbasis(v);
  for (Index i = 0; i < c.size(); ++i) c(i) /= spectral.eigenvalues(i) + lambda;
  return spectral.from_eigenbasis(c);
}

double bottom_shifted_pinv_norm(const SpectralInfo& spectral, const Vector& g) {
  const Index n = spectral.dim();
  const int s = spectral.multiplicity_s;
  if (s >= n) return 0.0;
  Vector c = spectral.to_eigenbasis(g);
  const double amin = spectral.alpha_min();
  double sum = 0.0;
  for (Index i = 0; i < n - s; ++i) {
    const double r = c(i) / (spectral.eigenvalues(i) - amin);
    sum += r * r;
  }
  return std::sqrt(sum);
}

CaseDiagnostic classify_case(const TrsProblem& problem, const SpectralInfo& spectral,
                             const Tolerances& tol) {
  CaseDiagnostic diag;
  diag.cos_bottom = spectral.bottom_cos(problem.g);
  diag.gap = spectral.multiplicity_s < spectral.dim() ? spectral.bottom_gap() : 0.0;
  diag.pinv_norm = bottom_shifted_pinv_norm(spectral, problem.g);
  diag.pinv_excess = diag.pinv_norm - problem.delta;
  diag.easy = diag.cos_bottom > tol.hard_tol || diag.pinv_norm > problem.delta;
  return diag;
}

KktResiduals verify_kkt(const TrsProblem& problem, const SpectralInfo& spectral,
                        const Vector& x, double lambda) {
  KktResiduals r;
  const double xnorm = x.norm();
  r.stationarity = (problem.a.apply(x) + lambda * x + problem.g).norm() / problem.g.norm();
  r.complementarity = std::abs(lambda * (problem.delta - xnorm));
  r.feasibility = xnorm - problem.delta;
  r.curvature_margin = spectral.alpha_min() + lambda;
  return r;
}

namespace {

// Safeguarded Newton on phi(lambda) = 1/delta - 1/||x(lambda)|| over the
// bracket (lo, hi]; phi is strictly decreasing with phi(lo^+) > 0. Iterates to
// evaluation-level residual so that the complementarity residual stays at
// machine scale even when the secular slope is steep (nearly hard case).
double solve_secular(const Vector& c, const Vector& alpha, double delta, double lo,
                     double hi, const Tolerances& tol) {
  const double accept = std::max(8.0 * kEps, 1e-15);  // on | ||x||/delta - 1 |
  double a = lo, b = hi;
  // ensure the upper end brackets: ||x(hi)|| < delta
  for (int guard = 0; guard < 64 && xnorm_from_coeffs(c, alpha, b) >= delta; ++guard)
    b = lo + 2.0 * (b - lo);

  double lambda = 0.5 * (a + b);
  double best_lambda = lambda;
  double best_err = std::numeric_limits<double>::infinity();
  for (int it = 0; it < tol.max_secular_iter; ++it) {
    const double nx = xnorm_from_coeffs(c, alpha, lambda);
    const double err = std::abs(nx - delta);
    if (err < best_err) {
      best_err = err;
      best_lambda = lambda;
    }
    if (err <= accept * delta) return lambda;
    if (nx > delta)
      a = lambda;
    else
      b = lambda;
    // Newton on phi = 1/delta - 1/nx: phi' = nx'/nx^2
    const double dnx = xnorm_derivative(c, alpha, lambda, nx);
    const double phi = 1.0 / delta - 1.0 / nx;
    const double dphi = dnx / (nx * nx);
    double next = lambda - phi / dphi;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (next == lambda || (b - a) <= kEps * std::max(1.0, std::abs(lambda))) {
      // interval exhausted at machine resolution
      return best_lambda;
    }
    lambda = next;
  }
  if (best_err <= tol.secular_tol * delta * 10.0) return best_lambda;
  fail(ErrorCode::MaxIterations, "secular iteration did not converge");
}

}  // namespace

SolvedTrs solve_dense(const TrsProblem& problem, const Tolerances& tol) {
  return solve_with_spectral(problem, sym_eig(problem.a, tol), tol);
}

SolvedTrs solve_with_spectral(const TrsProblem& problem, SpectralInfo spectral,
                              const Tolerances& tol) {
  SolvedTrs out{TrsSolution{}, std::move(spectral)};
  const SpectralInfo& sp = out.spectral;
  TrsSolution& sol = out.sol;
  const Index n = sp.dim();
  const double amin = sp.alpha_min();
  const double delta = problem.delta;
  Vector c = sp.to_eigenbasis(problem.g);

  auto finish = [&](double lambda, Vector x_coeffs, CaseLabel label) {
    sol.lambda = lambda;
    sol.x = sp.from_eigenbasis(x_coeffs);
    sol.label = label;
    sol.hard_gap = lambda + amin;
    sol.nearly_hard = sol.hard_gap <= tol.nearly_hard_tol * std::max(1.0, sp.norm);
    sol.kkt = verify_kkt(problem, sp, sol.x, lambda);
    return out;
  };

  auto boundary_coeffs = [&](double lambda) {
    Vector xc(n);
    for (Index i = 0; i < n; ++i) xc(i) = -c(i) / (sp.eigenvalues(i) + lambda);
    return xc;
  };

  // positive definite: try the unconstrained minimizer first
  if (amin > 0.0) {
    Vector xc = boundary_coeffs(0.0);
    const double nx = xc.norm();
    if (nx <= delta * (1.0 + tol.boundary_tol)) {
      const CaseLabel label = std::abs(nx - delta) <= tol.boundary_tol * delta
                                  ? CaseLabel::EasyBoundaryZero
                                  : CaseLabel::EasyInterior;
      return finish(0.0, std::move(xc), label);
    }
  }

  // hard-case branch: g (numerically) orthogonal to the bottom eigenspace and
  // the pseudoinverse step already inside the ball
  const CaseDiagnostic diag = classify_case(problem, sp, tol);
  if (amin <= 0.0 && !diag.easy) {
    const int s = sp.multiplicity_s;
    Vector xc(n);
    for (Index i = 0; i < n - s; ++i) xc(i) = -c(i) / (sp.eigenvalues(i) - amin);
    for (Index i = n - s; i < n; ++i) xc(i) = 0.0;
    const double interior_norm = xc.norm();
    const double tau =
        std::sqrt(std::max(0.0, delta * delta - interior_norm * interior_norm));
    xc(n - 1) += tau;  // any unit bottom direction is optimal; tau >= 0
    return finish(-amin, std::move(xc), CaseLabel::HardCase);
  }

  // easy boundary: solve ||x(lambda)|| = delta on (max(0, -alpha_n), inf)
  const double lo =
      std::max(0.0, -amin) + tol.pole_tol * std::max(1.0, sp.norm);
  const double hi = problem.g.norm() / delta + std::max(0.0, -amin) + lo;
  const double lambda = solve_secular(c, sp.eigenvalues, delta, lo, hi, tol);
  const CaseLabel label =
      lambda > tol.boundary_tol * std::max(1.0, sp.norm) ? CaseLabel::EasyBoundaryPositive
                                                         : CaseLabel::EasyBoundaryZero;
  return finish(lambda, boundary_coeffs(lambda), label);
}

MFormulation build_m(const TrsProblem& problem, const SolvedTrs& solved,
                     const Tolerances& tol) {
  const TrsSolution& sol = solved.sol;
  const SpectralInfo& sp = solved.spectral;
  const double delta = problem.delta;
  if (sol.label == CaseLabel::EasyInterior || std::abs(sol.x.norm() - delta) > 1e-6 * delta)
    fail(ErrorCode::NotBoundary, "M formulation requires a boundary solution");
  if (sol.label == CaseLabel::HardCase)
    fail(ErrorCode::HardCaseEigvec, "rightmost eigenvector is degenerate in the hard case");

  // y1 = c x*, y2 = c (A + lambda I)^{-1} x* with c > 0; then g^T y2 < 0 and
  // x* = -sign(g^T y2) delta y1/||y1|| as required.
  Vector u = shifted_inverse_apply(sp, sol.lambda, sol.x);
  const double scale = 1.0 / std::sqrt(delta * delta + u.squaredNorm());

  MFormulation m;
  m.lambda_r = sol.lambda;
  m.y1 = scale * sol.x;
  m.y2 = scale * u;
  m.y1ty2 = m.y1.dot(m.y2);
  m.gty2 = problem.g.dot(m.y2);
  if (std::abs(m.gty2) <= tol.hard_tol * problem.g.norm() * m.y2.norm())
    fail(ErrorCode::HardCaseEigvec, "g^T y2 vanishes (hard case)");

  // residual of M y = lambda_R y, evaluated blockwise
  Vector r1 = -problem.a.apply(m.y1) + problem.g * (m.gty2 / (delta * delta)) -
              m.lambda_r * m.y1;
  Vector r2 = m.y1 - problem.a.apply(m.y2) - m.lambda_r * m.y2;
  m.residual = std::sqrt(r1.squaredNorm() + r2.squaredNorm());
  m.m_norm = sp.norm + problem.g.squaredNorm() / (delta * delta) + 1.0;
  if (m.residual > 1e-8 * m.m_norm)
    fail(ErrorCode::Internal, "M eigenpair residual out of tolerance");
  return m;
}

}  // namespace trscond
