#include "lanczos.hpp"

#include <algorithm>
#include <cmath>

namespace trscond {

double LanczosState::relation_residual(const SymOperator& op) const {
  const Index k = steps();
  Matrix r(q.rows(), k);
  for (Index j = 0; j < k; ++j) {
    Vector col = op.apply(q.col(j));
    col -= omega(j) * q.col(j);
    if (j > 0) col -= theta(j - 1) * q.col(j - 1);
    if (j + 1 < k) col -= theta(j) * q.col(j + 1);
    if (j + 1 == k && next_q.size() > 0) col -= theta(k - 1) * next_q;
    r.col(j) = col;
  }
  return r.norm();
}

namespace detail {

LanczosProcess::LanczosProcess(const SymOperator& op, const Vector& start,
                               Reorth reorth, const Tolerances& tol)
    : op_(op), reorth_(reorth) {
  const double ns = start.norm();
  if (ns == 0.0) fail(ErrorCode::InvalidArgument, "Lanczos start vector is zero");
  breakdown_floor_ = tol.breakdown_tol * std::max(op.norm_estimate(), 1e-300);
  reserve(std::min<Index>(op.dim(), 16));
  next_q_ = start / ns;
}

LanczosProcess::LanczosProcess(const SymOperator& op, const LanczosState& prior,
                               Reorth reorth, const Tolerances& tol)
    : op_(op), reorth_(reorth) {
  breakdown_floor_ = tol.breakdown_tol * std::max(op.norm_estimate(), 1e-300);
  k_ = prior.steps();
  reserve(std::max<Index>(k_, 1));
  q_.leftCols(k_) = prior.q;
  omega_.head(k_) = prior.omega;
  theta_.head(k_) = prior.theta;
  next_q_ = prior.next_q;
  breakdown_ = prior.breakdown;
}

void LanczosProcess::reserve(Index cap) {
  cap = std::min(cap, op_.dim());
  if (q_.cols() >= cap && q_.rows() == op_.dim()) return;
  Matrix q2(op_.dim(), cap);
  Vector om2(cap), th2(cap);
  const Index keep = std::min(k_, q_.cols());
  if (keep > 0 && q_.rows() == op_.dim()) {
    q2.leftCols(keep) = q_.leftCols(keep);
    om2.head(keep) = omega_.head(keep);
    th2.head(keep) = theta_.head(keep);
  }
  q_ = std::move(q2);
  omega_ = std::move(om2);
  theta_ = std::move(th2);
}

bool LanczosProcess::step() {
  if (breakdown_ || k_ >= op_.dim()) return false;
  if (k_ + 1 > q_.cols()) reserve(std::min(op_.dim(), 2 * q_.cols()));

  q_.col(k_) = next_q_;
  Vector w = op_.apply(q_.col(k_));
  if (k_ > 0) w -= theta_(k_ - 1) * q_.col(k_ - 1);
  omega_(k_) = q_.col(k_).dot(w);
  w -= omega_(k_) * q_.col(k_);
  if (reorth_ == Reorth::Full) {
    // classical Gram-Schmidt, applied twice
    auto qk = q_.leftCols(k_ + 1);
    w -= qk * (qk.transpose() * w);
    w -= qk * (qk.transpose() * w);
  }
  theta_(k_) = w.norm();
  ++k_;
  if (theta_(k_ - 1) <= breakdown_floor_ || k_ == op_.dim()) {
    // exhausting the space is an invariant-subspace signal like any other
    breakdown_ = true;
    next_q_.resize(0);
    return false;
  }
  next_q_ = w / theta_(k_ - 1);
  return true;
}

LanczosState LanczosProcess::snapshot() const {
  LanczosState s;
  s.q = q_.leftCols(k_);
  s.omega = omega_.head(k_);
  s.theta = theta_.head(k_);
  s.next_q = next_q_;
  s.breakdown = breakdown_;
  return s;
}

}  // namespace detail

LanczosState lanczos_extend(const SymOperator& op, const Vector& start, Index k,
                            Reorth reorth, const Tolerances& tol) {
  if (k < 1 || k > op.dim())
    fail(ErrorCode::InvalidArgument, "Lanczos step count out of range");
  detail::LanczosProcess p(op, start, reorth, tol);
  while (p.steps() < k && p.step()) {
  }
  if (p.steps() == 0) fail(ErrorCode::Breakdown, "Lanczos broke down before the first step");
  return p.snapshot();
}

LanczosState lanczos_extend(const SymOperator& op, const LanczosState& prior, Index k,
                            Reorth reorth, const Tolerances& tol) {
  if (k < prior.steps()) fail(ErrorCode::InvalidArgument, "cannot shrink a Lanczos state");
  detail::LanczosProcess p(op, prior, reorth, tol);
  while (p.steps() < k && p.step()) {
  }
  return p.snapshot();
}

}  // namespace trscond
