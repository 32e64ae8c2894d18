#pragma once

#include <optional>

#include "conditioning.hpp"

namespace trscond {

/// Direction (E, e) along which the instance moves: A(eps) = A + eps E,
/// g(eps) = g + eps e. E is symmetrized once on ingestion. An empty E or e
/// stands for zero.
struct PerturbationDirection {
  Matrix e_mat;  // n x n symmetric (possibly 0 x 0)
  Vector e_vec;  // n (possibly empty)

  static PerturbationDirection make(Matrix e_mat, Vector e_vec) {
    PerturbationDirection d;
    if (e_mat.size() > 0) d.e_mat = 0.5 * (e_mat + e_mat.transpose());
    d.e_vec = std::move(e_vec);
    return d;
  }

  Vector apply_e(const Vector& v) const {
    return e_mat.size() > 0 ? Vector(e_mat * v) : Vector(Vector::Zero(v.size()));
  }
  Vector evec(Index n) const { return e_vec.size() > 0 ? e_vec : Vector(Vector::Zero(n)); }
  double e_mat_norm() const;  // spectral norm of E
  double e_vec_norm() const { return e_vec.size() > 0 ? e_vec.norm() : 0.0; }
};

struct MarginReport {
  double eta1 = 0.0;  // may be negative
  double eta2 = 0.0;
  double eta_max = 0.0;
  std::optional<double> spd_margin;  // alpha_n when A is positive definite
  double gap = 0.0;                  // alpha_{n-s} - alpha_n
  double cos_bottom = 0.0;           // cos angle(g, U2)
  double pinv_norm = 0.0;            // ||(A - alpha_n I)^+ g||
};

/// Easy-case persistence margins: any perturbation with
/// max(||eps E||, ||eps e||) < eta_max keeps the problem in the easy case.
MarginReport easy_case_margins(const TrsProblem& problem, const SpectralInfo& spectral,
                               const Tolerances& tol = {});

enum class DiffKind { Differentiable, NonDifferentiable, Interior };

struct Differentiability {
  DiffKind kind = DiffKind::Differentiable;
  double t = 0.0;  // x*^T A^{-1} (e + E x*)
  double left_lambda_prime = 0.0;
  double right_lambda_prime = 0.0;
  Vector left_x_prime;
  Vector right_x_prime;
};

struct SensitivityReport {
  double lambda_prime = 0.0;
  Vector x_prime;
  double lambda_bound_coeff = 0.0;  // coefficient of |eps| bounding |lambda(eps)-lambda|
  double x_bound_coeff = 0.0;       // coefficient of |eps| bounding ||x(eps)-x||/delta
  std::optional<Differentiability> boundary_zero;  // filled in the lambda*=0 boundary case
};

/// lambda'(0) for the positive-multiplier boundary case, through the
/// rightmost eigenpair of M.
double lambda_derivative(const TrsProblem& problem, const SolvedTrs& solved,
                         const MFormulation& m, const PerturbationDirection& dir);

/// x'(0) = (-A*^{-1} + y2 y2^T / (y1^T y2)) (E x* + e), same case.
Vector x_derivative(const TrsProblem& problem, const SolvedTrs& solved,
                    const MFormulation& m, const PerturbationDirection& dir);

/// Interior case: lambda'(0) = 0, x'(0) = -A^{-1}(E x* + e).
Vector interior_derivative(const TrsProblem& problem, const SolvedTrs& solved,
                           const PerturbationDirection& dir);

/// lambda* = 0 boundary trichotomy on t = x*^T A^{-1}(e + E x*).
Differentiability boundary_zero_classify(const TrsProblem& problem, const SolvedTrs& solved,
                                         const PerturbationDirection& dir,
                                         const Tolerances& tol = {});

/// First-order coefficients of |eps| in the multiplier and solution bounds.
void first_order_bounds(const TrsProblem& problem, const SolvedTrs& solved,
                        const MFormulation& m, const PerturbationDirection& dir,
                        double& lambda_coeff, double& x_coeff);

/// One-stop sensitivity analysis dispatching on the case label.
SensitivityReport sensitivity(const TrsProblem& problem, const SolvedTrs& solved,
                              const PerturbationDirection& dir, const Tolerances& tol = {});

/// Upper bound on ||B^+ b - Bt^+ bt|| under a rank-preserving perturbation
/// with kappa(B) * ||B - Bt|| / ||B|| < 1.
double wedin_bound(const Matrix& b_mat, const Matrix& bt_mat, const Vector& b,
                   const Vector& bt);

enum class FdSide { Central, Left, Right };

struct FdSample {
  double eps = 0.0;
  double lambda_quotient = 0.0;
  Vector x_quotient;
  double x_slope = 0.0;  // ||x(eps) - x(-eps)|| / (2 eps) (or one-sided)
};

struct FdDerivatives {
  std::vector<FdSample> samples;          // one per requested eps
  double lambda_extrapolated = 0.0;       // two-level Richardson limit
  Vector x_extrapolated;
  double lambda_error_estimate = 0.0;     // |extrapolated - finest quotient|
};

/// Finite-difference re-solve oracle: independent validation for every
/// derivative formula. Default eps ladder {1e-3, 1e-4, 1e-5, 1e-6}.
FdDerivatives fd_oracle(const TrsProblem& problem, const PerturbationDirection& dir,
                        const std::vector<double>& eps_list = {1e-3, 1e-4, 1e-5, 1e-6},
                        FdSide side = FdSide::Central, const Tolerances& tol = {});

/// The perturbed instance at a given eps (shared by fd_oracle and tests).
TrsProblem perturbed_problem(const TrsProblem& problem, const PerturbationDirection& dir,
                             double eps);

}  // namespace trscond
