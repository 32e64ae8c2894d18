#pragma once

#include "common.hpp"
#include "operator.hpp"

namespace trscond {

enum class Reorth { Full, None };

/// k-step Lanczos factorization A Q_k = Q_k T_k + theta_k q_{k+1} e_k^T.
/// Immutable snapshot; extending produces a new state.
struct LanczosState {
  Matrix q;            // n x k orthonormal basis
  Vector omega;        // T_k diagonal, length k
  Vector theta;        // T_k subdiagonal + trailing residual, length k
  Vector next_q;       // q_{k+1} (empty after breakdown)
  bool breakdown = false;

  Index steps() const { return omega.size(); }
  double residual_theta() const { return theta(steps() - 1); }

  /// Residual of the Lanczos relation, for invariant checks.
  double relation_residual(const SymOperator& op) const;
};

/// Runs (or extends) the Lanczos process from `start` for up to k total
/// steps. Breakdown (theta_j below breakdown_tol * ||A||) stops early with
/// the invariant-subspace flag set; that is a valid result, not an error.
LanczosState lanczos_extend(const SymOperator& op, const Vector& start, Index k,
                            Reorth reorth = Reorth::Full, const Tolerances& tol = {});
LanczosState lanczos_extend(const SymOperator& op, const LanczosState& prior, Index k,
                            Reorth reorth = Reorth::Full, const Tolerances& tol = {});

namespace detail {

/// Growable single-writer Lanczos workspace backing both lanczos_extend and
/// the GLTR pipeline; snapshots copy out an immutable LanczosState.
class LanczosProcess {
 public:
  LanczosProcess(const SymOperator& op, const Vector& start, Reorth reorth,
                 const Tolerances& tol);
  LanczosProcess(const SymOperator& op, const LanczosState& prior, Reorth reorth,
                 const Tolerances& tol);

  bool step();  // false on breakdown (no step taken beyond the flag)
  Index steps() const { return k_; }
  bool breakdown() const { return breakdown_; }
  LanczosState snapshot() const;

  const SymOperator& op() const { return op_; }
  Vector omega_head() const { return omega_.head(k_); }
  Vector theta_head() const { return theta_.head(k_); }
  double theta_at(Index i) const { return theta_(i); }
  const Matrix& basis_storage() const { return q_; }

 private:
  void reserve(Index cap);

  SymOperator op_;
  Reorth reorth_;
  double breakdown_floor_;
  Matrix q_;       // n x capacity
  Vector omega_;   // capacity
  Vector theta_;   // capacity
  Vector next_q_;  // candidate q_{k+1}
  Index k_ = 0;
  bool breakdown_ = false;
};

}  // namespace detail

}  // namespace trscond
