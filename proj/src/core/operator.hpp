#pragma once

#include <functional>
#include <memory>
#include <utility>

#include "common.hpp"

namespace trscond {

enum class Rep { Dense, Diagonal, MatrixFree };

/// Symmetric linear operator in one of three representations.
/// Dense input is symmetrized once on ingestion; after that every
/// representation is immutable and safe to share across threads.
class SymOperator {
 public:
  using ApplyFn = std::function<void(const Vector&, Vector&)>;

  static SymOperator dense(Matrix a) {
    if (a.rows() != a.cols() || a.rows() == 0)
      fail(ErrorCode::InvalidArgument, "dense operator must be square and nonempty");
    Matrix sym = 0.5 * (a + a.transpose());
    SymOperator op;
    op.rep_ = Rep::Dense;
    op.n_ = sym.rows();
    op.dense_ = std::make_shared<Matrix>(std::move(sym));
    return op;
  }

  static SymOperator diagonal(Vector d) {
    if (d.size() == 0) fail(ErrorCode::InvalidArgument, "diagonal operator must be nonempty");
    SymOperator op;
    op.rep_ = Rep::Diagonal;
    op.n_ = d.size();
    op.diag_ = std::make_shared<Vector>(std::move(d));
    return op;
  }

  static SymOperator matrix_free(Index n, ApplyFn apply, double norm_hint = 0.0) {
    if (n <= 0 || !apply) fail(ErrorCode::InvalidArgument, "bad matrix-free operator");
    SymOperator op;
    op.rep_ = Rep::MatrixFree;
    op.n_ = n;
    op.apply_ = std::make_shared<ApplyFn>(std::move(apply));
    op.norm_hint_ = norm_hint;
    return op;
  }

  Rep rep() const { return rep_; }
  Index dim() const { return n_; }

  const Matrix& dense_matrix() const {
    if (rep_ != Rep::Dense)
      fail(ErrorCode::UnsupportedRepresentation, "dense representation required");
    return *dense_;
  }

  const Vector& diag() const {
    if (rep_ != Rep::Diagonal)
      fail(ErrorCode::UnsupportedRepresentation, "diagonal representation required");
    return *diag_;
  }

  Vector apply(const Vector& v) const {
    switch (rep_) {
      case Rep::Dense:
        return (*dense_) * v;
      case Rep::Diagonal:
        return diag_->cwiseProduct(v);
      case Rep::MatrixFree: {
        Vector out(n_);
        (*apply_)(v, out);
        return out;
      }
    }
    fail(ErrorCode::Internal, "unreachable");
  }

  /// Cheap upper estimate of ||A||_2 for tolerance scaling. Exact for the
  /// diagonal representation, row-sum bound for dense, caller hint (or a few
  /// power-iteration sweeps) for matrix-free.
  double norm_estimate() const;

 private:
  SymOperator() = default;

  Rep rep_ = Rep::Dense;
  Index n_ = 0;
  std::shared_ptr<Matrix> dense_;
  std::shared_ptr<Vector> diag_;
  std::shared_ptr<ApplyFn> apply_;
  double norm_hint_ = 0.0;
};

}  // namespace trscond
