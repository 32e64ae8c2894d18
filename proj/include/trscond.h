/* trscond - trust-region subproblem solver and first-order sensitivity
 * toolkit. C89-compatible interface over the C++ core: opaque handles,
 * status codes, caller-owned buffers. Every function is thread-safe as long
 * as distinct threads operate on distinct handles.
 */
#ifndef TRSCOND_H
#define TRSCOND_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TRSCOND_API __declspec(dllexport)
#else
#define TRSCOND_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum trscond_status {
  TRSCOND_OK = 0,
  TRSCOND_ERR_INVALID_ARGUMENT,
  TRSCOND_ERR_UNSUPPORTED_REPRESENTATION,
  TRSCOND_ERR_NON_CONVERGENCE,
  TRSCOND_ERR_MAX_ITERATIONS,
  TRSCOND_ERR_DEGENERATE_GRADIENT,
  TRSCOND_ERR_WRONG_CASE,
  TRSCOND_ERR_HARD_CASE_INPUT,
  TRSCOND_ERR_HARD_CASE_EIGVEC,
  TRSCOND_ERR_NOT_BOUNDARY,
  TRSCOND_ERR_POLE_PROXIMITY,
  TRSCOND_ERR_ZERO_GAP,
  TRSCOND_ERR_RANK_MISMATCH,
  TRSCOND_ERR_CONTRACTION_VIOLATED,
  TRSCOND_ERR_PRECONDITION,
  TRSCOND_ERR_RITZ_DEGENERATE,
  TRSCOND_ERR_BREAKDOWN,
  TRSCOND_ERR_UNKNOWN_GENERATOR,
  TRSCOND_ERR_INTERNAL
} trscond_status;

typedef enum trscond_case {
  TRSCOND_CASE_EASY_INTERIOR = 0,
  TRSCOND_CASE_EASY_BOUNDARY_POSITIVE = 1,
  TRSCOND_CASE_EASY_BOUNDARY_ZERO = 2,
  TRSCOND_CASE_HARD = 3
} trscond_case;

typedef enum trscond_diff_kind {
  TRSCOND_DIFF_DIFFERENTIABLE = 0,
  TRSCOND_DIFF_NON_DIFFERENTIABLE = 1,
  TRSCOND_DIFF_INTERIOR = 2
} trscond_diff_kind;

typedef enum trscond_fd_side {
  TRSCOND_FD_CENTRAL = 0,
  TRSCOND_FD_LEFT = 1,
  TRSCOND_FD_RIGHT = 2
} trscond_fd_side;

typedef struct trscond_problem trscond_problem;
typedef struct trscond_result trscond_result; /* solution + spectrum */
typedef struct trscond_gltr trscond_gltr;     /* pipeline history */

/* Tolerance overrides; zero-initialized fields keep the built-in defaults.
 * Obtain the defaults with trscond_options_init. */
typedef struct trscond_options {
  double cluster_tol;
  double secular_tol;
  double boundary_tol;
  double hard_tol;
  double nearly_hard_tol;
  double pole_tol;
  double breakdown_tol;
  double ritz_gap_tol;
} trscond_options;

typedef struct trscond_kkt {
  double stationarity;      /* ||(A+lambda I)x + g|| / ||g|| */
  double complementarity;   /* |lambda (delta - ||x||)| */
  double feasibility;       /* ||x|| - delta */
  double curvature_margin;  /* alpha_n + lambda */
} trscond_kkt;

typedef struct trscond_margins {
  double eta1;
  double eta2;
  double eta_max;
  double spd_margin; /* NaN unless A is positive definite */
  double gap;        /* alpha_{n-s} - alpha_n */
  double cos_bottom; /* cos angle(g, bottom eigenspace) */
  double pinv_norm;  /* ||(A - alpha_n I)^+ g|| */
} trscond_margins;

typedef struct trscond_condition {
  double s_lambda;
  double s_x;
  double cond_lambda;
  double kappa_astar;
  double s_lambda_lower, s_lambda_upper;
  double s_x_lower, s_x_upper;
} trscond_condition;

typedef struct trscond_sensitivity {
  double lambda_prime;
  double lambda_bound_coeff;
  double x_bound_coeff;
  int diff_kind;            /* trscond_diff_kind */
  double t;                 /* x^T A^{-1}(e + E x), boundary-zero case */
  double left_lambda_prime; /* one-sided data, boundary-zero case */
  double right_lambda_prime;
} trscond_sensitivity;

typedef struct trscond_gltr_row {
  int64_t k;
  double lambda_k;
  double eta1, eta2;        /* NaN when the Ritz gap degenerates */
  double s_lambda, s_x;     /* NaN for interior reduced solutions */
  double residual;          /* theta_k |e_k^T h_k| */
  double ritz_bottom, ritz_second;
  double model_value;
  double h_norm;
} trscond_gltr_row;

TRSCOND_API const char* trscond_version(void);
TRSCOND_API const char* trscond_status_name(trscond_status status);
/* Message from the most recent failing call on this thread. */
TRSCOND_API const char* trscond_last_error(void);

TRSCOND_API void trscond_options_init(trscond_options* opts);

/* --- problems ---------------------------------------------------------- */

TRSCOND_API trscond_status trscond_problem_create_dense(int64_t n, const double* a_rowmajor,
                                                        const double* g, double delta,
                                                        trscond_problem** out);
TRSCOND_API trscond_status trscond_problem_create_diagonal(int64_t n, const double* diag,
                                                           const double* g, double delta,
                                                           trscond_problem** out);
/* Builtin families a/b/c/d of the experiment suite (diagonal, g = ones). */
TRSCOND_API trscond_status trscond_problem_generate(char gen, int64_t n, uint64_t seed,
                                                    double delta, trscond_problem** out);
TRSCOND_API void trscond_problem_destroy(trscond_problem* problem);
TRSCOND_API int64_t trscond_problem_dim(const trscond_problem* problem);
TRSCOND_API double trscond_problem_delta(const trscond_problem* problem);
TRSCOND_API trscond_status trscond_problem_diagonal(const trscond_problem* problem,
                                                    double* out /* n */);
TRSCOND_API trscond_status trscond_problem_gradient(const trscond_problem* problem,
                                                    double* out /* n */);

/* --- solving and per-solution queries ---------------------------------- */

TRSCOND_API trscond_status trscond_solve(const trscond_problem* problem,
                                         const trscond_options* opts /* nullable */,
                                         trscond_result** out);
TRSCOND_API void trscond_result_destroy(trscond_result* result);
TRSCOND_API double trscond_result_lambda(const trscond_result* result);
TRSCOND_API trscond_case trscond_result_case(const trscond_result* result);
TRSCOND_API int trscond_result_nearly_hard(const trscond_result* result);
TRSCOND_API double trscond_result_hard_gap(const trscond_result* result);
TRSCOND_API trscond_status trscond_result_x(const trscond_result* result, double* out /* n */);
TRSCOND_API trscond_status trscond_result_kkt(const trscond_result* result, trscond_kkt* out);
/* spectrum summary: alpha_max, alpha_min, bottom gap, multiplicity */
TRSCOND_API trscond_status trscond_result_spectrum(const trscond_result* result,
                                                   double* alpha_max, double* alpha_min,
                                                   double* gap, int64_t* multiplicity);

/* re-check a candidate (x, lambda) against the optimality conditions */
TRSCOND_API trscond_status trscond_verify(const trscond_problem* problem,
                                          const trscond_result* result, const double* x,
                                          double lambda, trscond_kkt* out);

/* --- analysis ---------------------------------------------------------- */

TRSCOND_API trscond_status trscond_compute_margins(const trscond_problem* problem,
                                                   const trscond_result* result,
                                                   trscond_margins* out);
TRSCOND_API trscond_status trscond_compute_condition(const trscond_problem* problem,
                                                     const trscond_result* result,
                                                     trscond_condition* out);

/* Sensitivity along (E, e); either pointer may be NULL for a zero block.
 * x_prime (length n) receives x'(0) when the solution is differentiable;
 * in the boundary-zero non-differentiable case left/right one-sided vectors
 * are written to x_prime_left / x_prime_right when non-NULL. */
TRSCOND_API trscond_status trscond_compute_sensitivity(
    const trscond_problem* problem, const trscond_result* result,
    const double* e_mat_rowmajor /* n*n or NULL */, const double* e_vec /* n or NULL */,
    trscond_sensitivity* out, double* x_prime /* n or NULL */,
    double* x_prime_left /* n or NULL */, double* x_prime_right /* n or NULL */);

/* Finite-difference re-solve oracle along (E, e). For each of the n_eps
 * epsilons writes one row {eps, lambda_quotient, x_slope} into the arrays;
 * the Richardson limit of the two finest levels lands in *lambda_limit. */
TRSCOND_API trscond_status trscond_fd_probe(const trscond_problem* problem,
                                            const double* e_mat_rowmajor,
                                            const double* e_vec, const double* eps_list,
                                            int64_t n_eps, int side /* trscond_fd_side */,
                                            double* lambda_quotients /* n_eps */,
                                            double* x_slopes /* n_eps */,
                                            double* lambda_limit /* nullable */);

/* --- large-scale pipeline ---------------------------------------------- */

TRSCOND_API trscond_status trscond_gltr_run(const trscond_problem* problem, int64_t k_max,
                                            double stop_rel_change, int reorth_full,
                                            const trscond_options* opts /* nullable */,
                                            trscond_gltr** out);
TRSCOND_API void trscond_gltr_destroy(trscond_gltr* run);
TRSCOND_API int64_t trscond_gltr_steps(const trscond_gltr* run);
TRSCOND_API int trscond_gltr_breakdown(const trscond_gltr* run);
TRSCOND_API int trscond_gltr_converged(const trscond_gltr* run);
/* set when |e_1^T z_k| stagnated at numerical zero: g appears orthogonal to
 * the bottom eigenspace and the streaming estimates are unreliable */
TRSCOND_API int trscond_gltr_coupling_warning(const trscond_gltr* run);
TRSCOND_API trscond_status trscond_gltr_get_row(const trscond_gltr* run, int64_t index,
                                            trscond_gltr_row* out);
/* lifted solution x_k = Q_k h_k of the final iterate */
TRSCOND_API trscond_status trscond_gltr_final_x(const trscond_gltr* run, double* out /* n */);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TRSCOND_H */
