#include "gltr.hpp"

#include <cmath>

#include "conditioning.hpp"

namespace trscond {

namespace detail {

// Everything a GLTR step derives from T_k comes out of one tridiagonal
// eigendecomposition; the reduced TRS reuses the solver on the spectral data
// and the condition estimates run the conditioning formulas in the Ritz basis
// (both s quantities are orthogonally invariant).
GltrIterate gltr_compute(const Vector& omega, const Vector& sub, double residual_theta,
                         const TrsProblem& problem, const Tolerances& tol) {
  const Index k = omega.size();
  if (k < 2) fail(ErrorCode::InvalidArgument, "GLTR step needs k >= 2");
  const double norm_g = problem.g.norm();

  Vector ritz;  // ascending
  Matrix vects;
  tridiag_eig(omega, sub, ritz, &vects);

  GltrIterate it;
  it.k = k;
  it.ritz_bottom = ritz(0);
  it.ritz_second = ritz(1);

  // reduced TRS min 1/2 h^T T_k h + ||g|| e_1^T h over ||h|| <= delta,
  // solved in the Ritz basis through the shared dense-path logic
  SpectralInfo sp;
  sp.eigenvalues = ritz.reverse();
  sp.basis = vects.rowwise().reverse();
  sp.norm = std::max(std::abs(ritz(0)), std::abs(ritz(k - 1)));
  sp.multiplicity_s = 1;
  while (sp.multiplicity_s < k &&
         sp.eigenvalues(k - 1 - sp.multiplicity_s) - ritz(0) <=
             tol.cluster_tol * std::max(1.0, sp.norm))
    ++sp.multiplicity_s;

  Matrix tk = Matrix::Zero(k, k);
  tk.diagonal() = omega;
  tk.diagonal(1) = sub;
  tk.diagonal(-1) = sub;
  Vector g_red = Vector::Zero(k);
  g_red(0) = norm_g;
  TrsProblem reduced(SymOperator::dense(std::move(tk)), std::move(g_red), problem.delta);
  SolvedTrs solved = solve_with_spectral(reduced, sp, tol);

  it.lambda_k = solved.sol.lambda;
  it.h = solved.sol.x;
  it.h_norm = it.h.norm();
  it.model_value = reduced.objective(it.h);
  it.residual_proxy = std::abs(residual_theta * it.h(k - 1));
  it.reduced_boundary = solved.sol.label != CaseLabel::EasyInterior;

  // margin estimates from the bottom Ritz pair
  const double gap = ritz(1) - ritz(0);
  it.bottom_coupling = std::abs(vects(0, 0));
  if (gap > tol.ritz_gap_tol * std::max(1.0, std::abs(ritz(0)))) {
    const double e1z = it.bottom_coupling;
    double pin = 0.0;
    for (Index i = 1; i < k; ++i) {
      const double r = vects(0, i) / (ritz(i) - ritz(0));
      pin += r * r;
    }
    pin = norm_g * std::sqrt(pin);
    it.eta1 = 0.5 * std::min(gap * (pin - problem.delta) /
                                 (1.5 * pin + 1.0 + norm_g * e1z / gap),
                             gap);
    it.eta2 = 0.5 * std::min({norm_g * gap * e1z / (4.0 * norm_g + gap),
                              norm_g * e1z / (2.0 * problem.delta), gap});
  }

  // condition estimates for boundary reduced solutions
  if (it.reduced_boundary && solved.sol.label != CaseLabel::HardCase) {
    SolvedTrs rotated;
    rotated.spectral = sym_eig(SymOperator::diagonal(sp.eigenvalues), tol);
    rotated.sol.lambda = it.lambda_k;
    rotated.sol.label = solved.sol.label;
    rotated.sol.x = sp.basis->transpose() * it.h;
    TrsProblem diag_problem(SymOperator::diagonal(sp.eigenvalues),
                            sp.basis->transpose() * reduced.g, problem.delta);
    it.s_lambda = s_lambda(diag_problem, rotated);
    it.s_x = s_x(diag_problem, rotated);
  }
  return it;
}

}  // namespace detail

GltrIterate gltr_step(const LanczosState& state, const TrsProblem& problem,
                      const Tolerances& tol) {
  const Index k = state.steps();
  if (k < 2) fail(ErrorCode::InvalidArgument, "GLTR step needs k >= 2");
  return detail::gltr_compute(state.omega, state.theta.head(k - 1),
                              state.breakdown ? 0.0 : state.residual_theta(), problem,
                              tol);
}

void eta_estimates(const LanczosState& state, const TrsProblem& problem, double& eta1,
                   double& eta2, const Tolerances& tol) {
  GltrIterate it = gltr_step(state, problem, tol);
  if (!it.eta1 || !it.eta2)
    fail(ErrorCode::RitzDegenerate, "bottom Ritz gap below tolerance; estimate withheld");
  eta1 = *it.eta1;
  eta2 = *it.eta2;
}

void cond_estimates(const GltrIterate& it, double& s_lambda_k, double& s_x_k) {
  if (!it.s_lambda || !it.s_x)
    fail(ErrorCode::WrongCase, "condition estimates need a boundary reduced solution");
  s_lambda_k = *it.s_lambda;
  s_x_k = *it.s_x;
}

namespace {

double rel_change(const std::optional<double>& now, const std::optional<double>& prev) {
  if (!now && !prev) return 0.0;  // absent on both sides counts as unchanged
  if (!now || !prev) return std::numeric_limits<double>::infinity();
  return std::abs(*now - *prev) / std::max(std::abs(*now), 1e-300);
}

}  // namespace

GltrHistory run_pipeline(const TrsProblem& problem, const GltrOptions& opts) {
  const Index n = problem.dim();
  const Index k_max = opts.k_max > 0 ? std::min(opts.k_max, n) : std::min<Index>(n, 1000);

  GltrHistory hist;
  detail::LanczosProcess proc(problem.a, problem.g, opts.reorth, opts.tol);
  int stable = 0;
  while (proc.steps() < k_max) {
    const bool advanced = proc.step();
    if (proc.steps() >= 2) {
      const Index k = proc.steps();
      GltrIterate it = detail::gltr_compute(
          proc.omega_head(), proc.theta_head().head(k - 1),
          proc.breakdown() ? 0.0 : proc.theta_at(k - 1), problem, opts.tol);
      if (!hist.iterates.empty()) {
        const GltrIterate& prev = hist.last();
        const double change =
            std::max({rel_change(it.eta1, prev.eta1), rel_change(it.eta2, prev.eta2),
                      rel_change(it.s_lambda, prev.s_lambda),
                      rel_change(it.s_x, prev.s_x)});
        stable = change < opts.stop_rel_change ? stable + 1 : 0;
      }
      hist.iterates.push_back(std::move(it));
      if (stable >= opts.stop_window) {
        hist.converged = true;
        break;
      }
      const size_t rows = hist.iterates.size();
      if (rows >= size_t(opts.stop_window)) {
        bool stagnant = true;
        for (size_t i = rows - size_t(opts.stop_window); i < rows; ++i)
          stagnant = stagnant && hist.iterates[i].bottom_coupling < 1e-14;
        if (stagnant) hist.bottom_coupling_warning = true;
      }
    }
    if (!advanced) break;
  }
  hist.breakdown = proc.breakdown();
  hist.state = proc.snapshot();
  return hist;
}

}  // namespace trscond
