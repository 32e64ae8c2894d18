#pragma once

#include "linalg.hpp"

namespace trscond {

/// min (1/2) x^T A x + g^T x subject to ||x|| <= delta.
struct TrsProblem {
  SymOperator a;
  Vector g;
  double delta;

  TrsProblem(SymOperator a_, Vector g_, double delta_)
      : a(std::move(a_)), g(std::move(g_)), delta(delta_) {
    if (g.size() != a.dim()) fail(ErrorCode::InvalidArgument, "gradient dimension mismatch");
    if (g.norm() == 0.0) fail(ErrorCode::DegenerateGradient, "gradient must be nonzero");
    if (!(delta > 0.0)) fail(ErrorCode::InvalidArgument, "radius must be positive");
  }

  Index dim() const { return a.dim(); }
  double objective(const Vector& x) const { return 0.5 * x.dot(a.apply(x)) + g.dot(x); }
};

enum class CaseLabel { EasyInterior, EasyBoundaryPositive, EasyBoundaryZero, HardCase };

struct KktResiduals {
  double stationarity = 0.0;      // ||(A + lambda I) x + g|| / ||g||
  double complementarity = 0.0;   // |lambda (delta - ||x||)|
  double feasibility = 0.0;       // ||x|| - delta
  double curvature_margin = 0.0;  // alpha_n + lambda
};

struct TrsSolution {
  Vector x;
  double lambda = 0.0;
  CaseLabel label = CaseLabel::EasyInterior;
  bool nearly_hard = false;
  double hard_gap = 0.0;  // lambda + alpha_n
  KktResiduals kkt;

  bool on_boundary() const { return label != CaseLabel::EasyInterior; }
};

/// Solution bundled with the spectrum it was computed from; nearly every
/// downstream analysis needs both.
struct SolvedTrs {
  TrsSolution sol;
  SpectralInfo spectral;
};

/// ||(A + lambda I)^{-1} g||^2 through the eigen-expansion; the secular
/// quantity behind the boundary equation. Requires lambda > -alpha_n.
double secular_value(const TrsProblem& problem, const SpectralInfo& spectral,
                     double lambda, const Tolerances& tol = {});

/// Global TRS solve on the dense/diagonal path: interior shortcut, safeguarded
/// Newton on the reciprocal secular equation for boundary solutions, explicit
/// hard-case branch, and easy/hard/nearly-hard classification.
SolvedTrs solve_dense(const TrsProblem& problem, const Tolerances& tol = {});

/// Same solve against a spectrum the caller already has (the GLTR reduction
/// feeds tridiagonal eigendecompositions through here).
SolvedTrs solve_with_spectral(const TrsProblem& problem, SpectralInfo spectral,
                              const Tolerances& tol = {});

/// Recomputes the optimality residuals of a (possibly externally produced)
/// candidate solution.
KktResiduals verify_kkt(const TrsProblem& problem, const SpectralInfo& spectral,
                        const Vector& x, double lambda);

/// Eigen-formulation data for boundary solutions: the rightmost eigenpair of
///     M = [ -A        g g^T / delta^2 ]
///         [  I        -A              ]
/// materialized from the secular solution. The right eigenvector is
/// y = (y1; y2) with ||y|| = 1, y1 = (A + lambda I) y2, sign fixed so that
/// g^T y2 <= 0; the left eigenvector is w = (y2; y1).
struct MFormulation {
  Vector y1, y2;
  double lambda_r = 0.0;
  double y1ty2 = 0.0;    // > 0 in the easy case
  double gty2 = 0.0;     // <= 0 by the sign convention
  double m_norm = 0.0;   // scale used by the residual invariant
  double residual = 0.0; // ||M y - lambda_r y||

  int sign_gty2() const { return gty2 < 0.0 ? -1 : 1; }
};

MFormulation build_m(const TrsProblem& problem, const SolvedTrs& solved,
                     const Tolerances& tol = {});

/// Hard-case indicators of the unperturbed instance.
struct CaseDiagnostic {
  double cos_bottom = 0.0;     // cos angle(g, U2)
  double pinv_norm = 0.0;      // ||(A - alpha_n I)^+ g||
  double pinv_excess = 0.0;    // pinv_norm - delta
  double gap = 0.0;            // alpha_{n-s} - alpha_n (0 when s = n)
  bool easy = true;
};

CaseDiagnostic classify_case(const TrsProblem& problem, const SpectralInfo& spectral,
                             const Tolerances& tol = {});

/// (A + lambda I)^{-1} v through the eigen-expansion. Requires
/// lambda > -alpha_n.
Vector shifted_inverse_apply(const SpectralInfo& spectral, double lambda, const Vector& v);

/// ||(A - alpha_n I)^+ g|| with the bottom cluster annihilated.
double bottom_shifted_pinv_norm(const SpectralInfo& spectral, const Vector& g);

}  // namespace trscond
