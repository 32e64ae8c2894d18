#pragma once

#include <optional>

#include "lanczos.hpp"
#include "solver.hpp"

namespace trscond {

/// One step of the GLTR pipeline: the reduced k x k TRS solution plus the
/// streaming margin and condition estimates derived from T_k.
struct GltrIterate {
  Index k = 0;
  double lambda_k = 0.0;
  Vector h;                         // reduced solution, length k
  double h_norm = 0.0;
  double model_value = 0.0;         // f(x_k), computed on the reduced model
  double residual_proxy = 0.0;      // theta_k |e_k^T h_k|
  double ritz_bottom = 0.0;         // smallest Ritz value of T_k
  double ritz_second = 0.0;         // second smallest
  double bottom_coupling = 0.0;     // |e_1^T z_k|, the cos angle(g, U2) proxy
  std::optional<double> eta1, eta2;          // withheld when the Ritz gap degenerates
  std::optional<double> s_lambda, s_x;       // withheld for interior reduced solutions
  bool reduced_boundary = false;
};

struct GltrOptions {
  Index k_max = 0;                 // 0 selects min(n, 1000)
  double stop_rel_change = 1e-8;   // on all four estimates
  int stop_window = 5;             // consecutive steps below the target
  Reorth reorth = Reorth::Full;
  Tolerances tol;
};

struct GltrHistory {
  std::vector<GltrIterate> iterates;
  LanczosState state;              // final Lanczos factorization
  bool breakdown = false;
  bool converged = false;
  // the estimates assume g couples to the bottom eigenspace; flagged when
  // |e_1^T z_k| stagnates at numerical zero across the stop window
  bool bottom_coupling_warning = false;

  const GltrIterate& last() const { return iterates.back(); }
  /// Lifted solution x_k = Q_k h_k for the recorded iterate.
  Vector lift(const GltrIterate& it) const { return state.q.leftCols(it.k) * it.h; }
};

/// Reduced TRS + estimates for an existing Lanczos state (k >= 2).
GltrIterate gltr_step(const LanczosState& state, const TrsProblem& problem,
                      const Tolerances& tol = {});

/// Margin estimates eta1^(k), eta2^(k) from the bottom Ritz pair of T_k.
/// Throws RitzDegenerate when the Ritz gap is below tolerance.
void eta_estimates(const LanczosState& state, const TrsProblem& problem, double& eta1,
                   double& eta2, const Tolerances& tol = {});

/// Condition estimates s(lambda_k), s(h_k) for a boundary reduced solution.
void cond_estimates(const GltrIterate& it, double& s_lambda_k, double& s_x_k);

/// Runs Lanczos + reduced solves until every streaming estimate stabilizes
/// (relative change below the stop target over the window), breakdown, or
/// k_max. Works for any operator representation, including matrix-free.
GltrHistory run_pipeline(const TrsProblem& problem, const GltrOptions& opts = {});

}  // namespace trscond
