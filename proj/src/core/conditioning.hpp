#pragma once

#include "solver.hpp"

namespace trscond {

struct BoundPair {
  double lower = 0.0;
  double upper = 0.0;
};

struct ConditionReport {
  double s_lambda = 0.0;
  double s_x = 0.0;
  double cond_lambda = 0.0;     // eigenvalue condition number 1/(2 |y1^T y2|)
  double kappa_astar = 0.0;     // ||A*|| ||A*^{-1}||
  BoundPair s_lambda_bounds;    // [max(1,1/delta), sqrt(kappa) max(1,1/delta)]
  BoundPair s_x_bounds;         // [(a1+l)/(a_{n-1}+l), kappa]
  // interior solutions carry only the classical kappa(A); the structured
  // condition numbers are boundary quantities and are reported as NaN there
  bool classical_only = false;
};

/// s(lambda*) = ||A*^{-1} x*|| / (x*^T A*^{-1} x*) * max(1, delta).
/// Easy boundary solutions only; for lambda* = 0 the formulas run with A* = A.
double s_lambda(const TrsProblem& problem, const SolvedTrs& solved);

/// 1 / (2 |y1^T y2|) for the unit rightmost eigenvector of M.
double cond_lambda(const MFormulation& m);

/// s(x*) = ||A*|| ||(P A* P)^+|| with P = I - x* x*^T / delta^2, computed
/// through the projected-eigenvalue route: the reciprocal of the (n-1)-th
/// largest eigenvalue of P A* P. The diagonal path evaluates the same
/// quantity as the top eigenvalue of A*^{-1} - vv^T/beta (rank-one secular),
/// which avoids any O(n^2) work.
double s_x(const TrsProblem& problem, const SolvedTrs& solved);

/// Both bound sandwiches for s(lambda*) and s(x*). Interior solutions get
/// the classical kappa(A) with classical_only set and NaN structured values.
ConditionReport condition_report(const TrsProblem& problem, const SolvedTrs& solved,
                                 const MFormulation* m = nullptr);

/// (P A* P) second-smallest eigenvalue, exposed for the identity tests.
double projected_second_eigenvalue(const TrsProblem& problem, const SolvedTrs& solved);

/// Moore-Penrose inverse of W + c d^T under the rank-one update conditions
/// c in range(W), d in range(W^T), 1 + c^T W^+ d = 0. PreconditionViolated
/// names the failing clause.
Matrix rank_one_pinv_update(const Matrix& w, const Vector& c, const Vector& d,
                            double check_tol = 1e-10);

}  // namespace trscond
