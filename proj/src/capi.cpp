#include "trscond.h"

#include <cmath>
#include <cstring>
#include <string>

#include "core/conditioning.hpp"
#include "core/generate.hpp"
#include "core/gltr.hpp"
#include "core/perturbation.hpp"
#include "core/solver.hpp"

using namespace trscond;

struct trscond_problem {
  TrsProblem p;
};

struct trscond_result {
  SolvedTrs solved;
};

struct trscond_gltr {
  GltrHistory hist;
};

namespace {

thread_local std::string g_last_error;

trscond_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return TRSCOND_ERR_INVALID_ARGUMENT;
    case ErrorCode::UnsupportedRepresentation: return TRSCOND_ERR_UNSUPPORTED_REPRESENTATION;
    case ErrorCode::NonConvergence: return TRSCOND_ERR_NON_CONVERGENCE;
    case ErrorCode::MaxIterations: return TRSCOND_ERR_MAX_ITERATIONS;
    case ErrorCode::DegenerateGradient: return TRSCOND_ERR_DEGENERATE_GRADIENT;
    case ErrorCode::WrongCase: return TRSCOND_ERR_WRONG_CASE;
    case ErrorCode::HardCaseInput: return TRSCOND_ERR_HARD_CASE_INPUT;
    case ErrorCode::HardCaseEigvec: return TRSCOND_ERR_HARD_CASE_EIGVEC;
    case ErrorCode::NotBoundary: return TRSCOND_ERR_NOT_BOUNDARY;
    case ErrorCode::PoleProximity: return TRSCOND_ERR_POLE_PROXIMITY;
    case ErrorCode::ZeroGap: return TRSCOND_ERR_ZERO_GAP;
    case ErrorCode::RankMismatch: return TRSCOND_ERR_RANK_MISMATCH;
    case ErrorCode::ContractionViolated: return TRSCOND_ERR_CONTRACTION_VIOLATED;
    case ErrorCode::PreconditionViolated: return TRSCOND_ERR_PRECONDITION;
    case ErrorCode::RitzDegenerate: return TRSCOND_ERR_RITZ_DEGENERATE;
    case ErrorCode::Breakdown: return TRSCOND_ERR_BREAKDOWN;
    case ErrorCode::UnknownGenerator: return TRSCOND_ERR_UNKNOWN_GENERATOR;
    case ErrorCode::Internal: return TRSCOND_ERR_INTERNAL;
  }
  return TRSCOND_ERR_INTERNAL;
}

template <typename Fn>
trscond_status guarded(Fn&& fn) {
  try {
    fn();
    return TRSCOND_OK;
  } catch (const Error& err) {
    g_last_error = err.what();
    return to_status(err.code());
  } catch (const std::exception& err) {
    g_last_error = err.what();
    return TRSCOND_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TRSCOND_ERR_INTERNAL;
  }
}

Tolerances to_tolerances(const trscond_options* opts) {
  Tolerances tol;
  if (!opts) return tol;
  if (opts->cluster_tol > 0) tol.cluster_tol = opts->cluster_tol;
  if (opts->secular_tol > 0) tol.secular_tol = opts->secular_tol;
  if (opts->boundary_tol > 0) tol.boundary_tol = opts->boundary_tol;
  if (opts->hard_tol > 0) tol.hard_tol = opts->hard_tol;
  if (opts->nearly_hard_tol > 0) tol.nearly_hard_tol = opts->nearly_hard_tol;
  if (opts->pole_tol > 0) tol.pole_tol = opts->pole_tol;
  if (opts->breakdown_tol > 0) tol.breakdown_tol = opts->breakdown_tol;
  if (opts->ritz_gap_tol > 0) tol.ritz_gap_tol = opts->ritz_gap_tol;
  return tol;
}

PerturbationDirection to_direction(Index n, const double* e_mat, const double* e_vec) {
  Matrix em;
  Vector ev;
  if (e_mat) em = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                  Eigen::RowMajor>>(e_mat, n, n);
  if (e_vec) ev = Eigen::Map<const Vector>(e_vec, n);
  return PerturbationDirection::make(std::move(em), std::move(ev));
}

double opt_or_nan(const std::optional<double>& v) {
  return v ? *v : std::nan("");
}

}  // namespace

extern "C" {

const char* trscond_version(void) { return "1.0.0"; }

const char* trscond_status_name(trscond_status status) {
  switch (status) {
    case TRSCOND_OK: return "ok";
    case TRSCOND_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case TRSCOND_ERR_UNSUPPORTED_REPRESENTATION: return "unsupported_representation";
    case TRSCOND_ERR_NON_CONVERGENCE: return "non_convergence";
    case TRSCOND_ERR_MAX_ITERATIONS: return "max_iterations";
    case TRSCOND_ERR_DEGENERATE_GRADIENT: return "degenerate_gradient";
    case TRSCOND_ERR_WRONG_CASE: return "wrong_case";
    case TRSCOND_ERR_HARD_CASE_INPUT: return "hard_case_input";
    case TRSCOND_ERR_HARD_CASE_EIGVEC: return "hard_case_eigvec";
    case TRSCOND_ERR_NOT_BOUNDARY: return "not_boundary";
    case TRSCOND_ERR_POLE_PROXIMITY: return "pole_proximity";
    case TRSCOND_ERR_ZERO_GAP: return "zero_gap";
    case TRSCOND_ERR_RANK_MISMATCH: return "rank_mismatch";
    case TRSCOND_ERR_CONTRACTION_VIOLATED: return "contraction_violated";
    case TRSCOND_ERR_PRECONDITION: return "precondition_violated";
    case TRSCOND_ERR_RITZ_DEGENERATE: return "ritz_degenerate";
    case TRSCOND_ERR_BREAKDOWN: return "breakdown";
    case TRSCOND_ERR_UNKNOWN_GENERATOR: return "unknown_generator";
    case TRSCOND_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* trscond_last_error(void) { return g_last_error.c_str(); }

void trscond_options_init(trscond_options* opts) {
  if (!opts) return;
  Tolerances tol;
  opts->cluster_tol = tol.cluster_tol;
  opts->secular_tol = tol.secular_tol;
  opts->boundary_tol = tol.boundary_tol;
  opts->hard_tol = tol.hard_tol;
  opts->nearly_hard_tol = tol.nearly_hard_tol;
  opts->pole_tol = tol.pole_tol;
  opts->breakdown_tol = tol.breakdown_tol;
  opts->ritz_gap_tol = tol.ritz_gap_tol;
}

trscond_status trscond_problem_create_dense(int64_t n, const double* a_rowmajor,
                                            const double* g, double delta,
                                            trscond_problem** out) {
  return guarded([&] {
    if (!a_rowmajor || !g || !out || n <= 0)
      fail(ErrorCode::InvalidArgument, "null buffer or bad dimension");
    Matrix a = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                              Eigen::RowMajor>>(a_rowmajor, n, n);
    Vector gv = Eigen::Map<const Vector>(g, n);
    *out = new trscond_problem{TrsProblem(SymOperator::dense(std::move(a)), std::move(gv), delta)};
  });
}

trscond_status trscond_problem_create_diagonal(int64_t n, const double* diag,
                                               const double* g, double delta,
                                               trscond_problem** out) {
  return guarded([&] {
    if (!diag || !g || !out || n <= 0)
      fail(ErrorCode::InvalidArgument, "null buffer or bad dimension");
    Vector d = Eigen::Map<const Vector>(diag, n);
    Vector gv = Eigen::Map<const Vector>(g, n);
    *out = new trscond_problem{
        TrsProblem(SymOperator::diagonal(std::move(d)), std::move(gv), delta)};
  });
}

trscond_status trscond_problem_generate(char gen, int64_t n, uint64_t seed, double delta,
                                        trscond_problem** out) {
  return guarded([&] {
    if (!out) fail(ErrorCode::InvalidArgument, "null output");
    *out = new trscond_problem{generate_problem(gen, n, seed, delta)};
  });
}

void trscond_problem_destroy(trscond_problem* problem) { delete problem; }

int64_t trscond_problem_dim(const trscond_problem* problem) {
  return problem ? problem->p.dim() : 0;
}

double trscond_problem_delta(const trscond_problem* problem) {
  return problem ? problem->p.delta : 0.0;
}

trscond_status trscond_problem_diagonal(const trscond_problem* problem, double* out) {
  return guarded([&] {
    if (!problem || !out) fail(ErrorCode::InvalidArgument, "null argument");
    const Vector& d = problem->p.a.diag();
    std::memcpy(out, d.data(), sizeof(double) * d.size());
  });
}

trscond_status trscond_problem_gradient(const trscond_problem* problem, double* out) {
  return guarded([&] {
    if (!problem || !out) fail(ErrorCode::InvalidArgument, "null argument");
    std::memcpy(out, problem->p.g.data(), sizeof(double) * problem->p.g.size());
  });
}

trscond_status trscond_solve(const trscond_problem* problem, const trscond_options* opts,
                             trscond_result** out) {
  return guarded([&] {
    if (!problem || !out) fail(ErrorCode::InvalidArgument, "null argument");
    *out = new trscond_result{solve_dense(problem->p, to_tolerances(opts))};
  });
}

void trscond_result_destroy(trscond_result* result) { delete result; }

double trscond_result_lambda(const trscond_result* result) {
  return result ? result->solved.sol.lambda : std::nan("");
}

trscond_case trscond_result_case(const trscond_result* result) {
  if (!result) return TRSCOND_CASE_HARD;
  switch (result->solved.sol.label) {
    case CaseLabel::EasyInterior: return TRSCOND_CASE_EASY_INTERIOR;
    case CaseLabel::EasyBoundaryPositive: return TRSCOND_CASE_EASY_BOUNDARY_POSITIVE;
    case CaseLabel::EasyBoundaryZero: return TRSCOND_CASE_EASY_BOUNDARY_ZERO;
    case CaseLabel::HardCase: return TRSCOND_CASE_HARD;
  }
  return TRSCOND_CASE_HARD;
}

int trscond_result_nearly_hard(const trscond_result* result) {
  return result && result->solved.sol.nearly_hard ? 1 : 0;
}

double trscond_result_hard_gap(const trscond_result* result) {
  return result ? result->solved.sol.hard_gap : std::nan("");
}

trscond_status trscond_result_x(const trscond_result* result, double* out) {
  return guarded([&] {
    if (!result || !out) fail(ErrorCode::InvalidArgument, "null argument");
    const Vector& x = result->solved.sol.x;
    std::memcpy(out, x.data(), sizeof(double) * x.size());
  });
}

trscond_status trscond_result_kkt(const trscond_result* result, trscond_kkt* out) {
  return guarded([&] {
    if (!result || !out) fail(ErrorCode::InvalidArgument, "null argument");
    const KktResiduals& k = result->solved.sol.kkt;
    *out = {k.stationarity, k.complementarity, k.feasibility, k.curvature_margin};
  });
}

trscond_status trscond_result_spectrum(const trscond_result* result, double* alpha_max,
                                       double* alpha_min, double* gap,
                                       int64_t* multiplicity) {
  return guarded([&] {
    if (!result) fail(ErrorCode::InvalidArgument, "null argument");
    const SpectralInfo& sp = result->solved.spectral;
    if (alpha_max) *alpha_max = sp.alpha_max();
    if (alpha_min) *alpha_min = sp.alpha_min();
    if (gap) *gap = sp.multiplicity_s < sp.dim() ? sp.bottom_gap() : 0.0;
    if (multiplicity) *multiplicity = sp.multiplicity_s;
  });
}

trscond_status trscond_verify(const trscond_problem* problem, const trscond_result* result,
                              const double* x, double lambda, trscond_kkt* out) {
  return guarded([&] {
    if (!problem || !result || !x || !out) fail(ErrorCode::InvalidArgument, "null argument");
    Vector xv = Eigen::Map<const Vector>(x, problem->p.dim());
    KktResiduals k = verify_kkt(problem->p, result->solved.spectral, xv, lambda);
    *out = {k.stationarity, k.complementarity, k.feasibility, k.curvature_margin};
  });
}

trscond_status trscond_compute_margins(const trscond_problem* problem,
                                       const trscond_result* result, trscond_margins* out) {
  return guarded([&] {
    if (!problem || !result || !out) fail(ErrorCode::InvalidArgument, "null argument");
    MarginReport r = easy_case_margins(problem->p, result->solved.spectral);
    out->eta1 = r.eta1;
    out->eta2 = r.eta2;
    out->eta_max = r.eta_max;
    out->spd_margin = r.spd_margin ? *r.spd_margin : std::nan("");
    out->gap = r.gap;
    out->cos_bottom = r.cos_bottom;
    out->pinv_norm = r.pinv_norm;
  });
}

trscond_status trscond_compute_condition(const trscond_problem* problem,
                                         const trscond_result* result,
                                         trscond_condition* out) {
  return guarded([&] {
    if (!problem || !result || !out) fail(ErrorCode::InvalidArgument, "null argument");
    ConditionReport r = condition_report(problem->p, result->solved);
    out->s_lambda = r.s_lambda;
    out->s_x = r.s_x;
    out->cond_lambda = r.cond_lambda;
    out->kappa_astar = r.kappa_astar;
    out->s_lambda_lower = r.s_lambda_bounds.lower;
    out->s_lambda_upper = r.s_lambda_bounds.upper;
    out->s_x_lower = r.s_x_bounds.lower;
    out->s_x_upper = r.s_x_bounds.upper;
  });
}

trscond_status trscond_compute_sensitivity(const trscond_problem* problem,
                                           const trscond_result* result,
                                           const double* e_mat_rowmajor,
                                           const double* e_vec, trscond_sensitivity* out,
                                           double* x_prime, double* x_prime_left,
                                           double* x_prime_right) {
  return guarded([&] {
    if (!problem || !result || !out) fail(ErrorCode::InvalidArgument, "null argument");
    const Index n = problem->p.dim();
    PerturbationDirection dir = to_direction(n, e_mat_rowmajor, e_vec);
    SensitivityReport r = sensitivity(problem->p, result->solved, dir);
    out->lambda_prime = r.lambda_prime;
    out->lambda_bound_coeff = r.lambda_bound_coeff;
    out->x_bound_coeff = r.x_bound_coeff;
    out->t = 0.0;
    out->left_lambda_prime = out->right_lambda_prime = r.lambda_prime;
    if (result->solved.sol.label == CaseLabel::EasyInterior)
      out->diff_kind = TRSCOND_DIFF_INTERIOR;
    else
      out->diff_kind = TRSCOND_DIFF_DIFFERENTIABLE;
    if (r.boundary_zero) {
      const Differentiability& d = *r.boundary_zero;
      out->diff_kind = d.kind == DiffKind::Differentiable
                           ? TRSCOND_DIFF_DIFFERENTIABLE
                           : TRSCOND_DIFF_NON_DIFFERENTIABLE;
      out->t = d.t;
      out->left_lambda_prime = d.left_lambda_prime;
      out->right_lambda_prime = d.right_lambda_prime;
      if (x_prime_left)
        std::memcpy(x_prime_left, d.left_x_prime.data(), sizeof(double) * n);
      if (x_prime_right)
        std::memcpy(x_prime_right, d.right_x_prime.data(), sizeof(double) * n);
      if (x_prime && d.kind == DiffKind::Differentiable)
        std::memcpy(x_prime, d.right_x_prime.data(), sizeof(double) * n);
    } else if (x_prime) {
      std::memcpy(x_prime, r.x_prime.data(), sizeof(double) * n);
      if (x_prime_left) std::memcpy(x_prime_left, r.x_prime.data(), sizeof(double) * n);
      if (x_prime_right) std::memcpy(x_prime_right, r.x_prime.data(), sizeof(double) * n);
    }
  });
}

trscond_status trscond_fd_probe(const trscond_problem* problem, const double* e_mat_rowmajor,
                                const double* e_vec, const double* eps_list, int64_t n_eps,
                                int side, double* lambda_quotients, double* x_slopes,
                                double* lambda_limit) {
  return guarded([&] {
    if (!problem || !eps_list || n_eps <= 0 || !lambda_quotients || !x_slopes)
      fail(ErrorCode::InvalidArgument, "null argument");
    const Index n = problem->p.dim();
    PerturbationDirection dir = to_direction(n, e_mat_rowmajor, e_vec);
    std::vector<double> eps(eps_list, eps_list + n_eps);
    FdSide fd_side = side == TRSCOND_FD_LEFT    ? FdSide::Left
                     : side == TRSCOND_FD_RIGHT ? FdSide::Right
                                                : FdSide::Central;
    FdDerivatives fd = fd_oracle(problem->p, dir, eps, fd_side);
    for (int64_t i = 0; i < n_eps; ++i) {
      lambda_quotients[i] = fd.samples[size_t(i)].lambda_quotient;
      x_slopes[i] = fd.samples[size_t(i)].x_slope;
    }
    if (lambda_limit) *lambda_limit = fd.lambda_extrapolated;
  });
}

trscond_status trscond_gltr_run(const trscond_problem* problem, int64_t k_max,
                                double stop_rel_change, int reorth_full,
                                const trscond_options* opts, trscond_gltr** out) {
  return guarded([&] {
    if (!problem || !out) fail(ErrorCode::InvalidArgument, "null argument");
    GltrOptions gopts;
    gopts.k_max = k_max;
    if (stop_rel_change > 0) gopts.stop_rel_change = stop_rel_change;
    gopts.reorth = reorth_full ? Reorth::Full : Reorth::None;
    gopts.tol = to_tolerances(opts);
    *out = new trscond_gltr{run_pipeline(problem->p, gopts)};
  });
}

void trscond_gltr_destroy(trscond_gltr* run) { delete run; }

int64_t trscond_gltr_steps(const trscond_gltr* run) {
  return run ? int64_t(run->hist.iterates.size()) : 0;
}

int trscond_gltr_breakdown(const trscond_gltr* run) {
  return run && run->hist.breakdown ? 1 : 0;
}

int trscond_gltr_converged(const trscond_gltr* run) {
  return run && run->hist.converged ? 1 : 0;
}

int trscond_gltr_coupling_warning(const trscond_gltr* run) {
  return run && run->hist.bottom_coupling_warning ? 1 : 0;
}

trscond_status trscond_gltr_get_row(const trscond_gltr* run, int64_t index,
                                trscond_gltr_row* out) {
  return guarded([&] {
    if (!run || !out || index < 0 || size_t(index) >= run->hist.iterates.size())
      fail(ErrorCode::InvalidArgument, "row index out of range");
    const GltrIterate& it = run->hist.iterates[size_t(index)];
    out->k = it.k;
    out->lambda_k = it.lambda_k;
    out->eta1 = opt_or_nan(it.eta1);
    out->eta2 = opt_or_nan(it.eta2);
    out->s_lambda = opt_or_nan(it.s_lambda);
    out->s_x = opt_or_nan(it.s_x);
    out->residual = it.residual_proxy;
    out->ritz_bottom = it.ritz_bottom;
    out->ritz_second = it.ritz_second;
    out->model_value = it.model_value;
    out->h_norm = it.h_norm;
  });
}

trscond_status trscond_gltr_final_x(const trscond_gltr* run, double* out) {
  return guarded([&] {
    if (!run || !out || run->hist.iterates.empty())
      fail(ErrorCode::InvalidArgument, "no iterates");
    Vector x = run->hist.lift(run->hist.last());
    std::memcpy(out, x.data(), sizeof(double) * x.size());
  });
}

}  // extern "C"
