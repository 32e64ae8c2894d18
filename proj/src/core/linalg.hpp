#pragma once

#include <optional>

#include "common.hpp"
#include "operator.hpp"

namespace trscond {

/// Full spectrum of a symmetric operator, eigenvalues sorted non-increasing
/// (alpha_1 >= ... >= alpha_n). The dense path stores the orthonormal basis;
/// the diagonal path stores only the sort permutation, so coefficient-space
/// work stays O(n).
struct SpectralInfo {
  Vector eigenvalues;                  // descending
  std::optional<Matrix> basis;         // columns match eigenvalue order (dense path)
  std::vector<Index> perm;             // diagonal path: perm[i] = original index
  int multiplicity_s = 1;              // size of the bottom cluster
  double norm = 0.0;                   // ||A||_2, exact from the spectrum

  Index dim() const { return eigenvalues.size(); }
  double alpha_min() const { return eigenvalues(dim() - 1); }
  double alpha_max() const { return eigenvalues(0); }

  /// Spectral gap alpha_{n-s} - alpha_n; requires s < n.
  double bottom_gap() const {
    if (multiplicity_s >= dim()) fail(ErrorCode::ZeroGap, "bottom cluster spans the whole spectrum");
    return eigenvalues(dim() - multiplicity_s - 1) - alpha_min();
  }

  /// Coefficients of v in the eigenbasis, in eigenvalue (descending) order.
  Vector to_eigenbasis(const Vector& v) const;
  /// Maps eigenbasis coefficients back to the original basis.
  Vector from_eigenbasis(const Vector& c) const;

  /// Orthonormal basis of the bottom eigenspace, n x s.
  Matrix bottom_basis() const;

  /// cos angle(v, bottom eigenspace) = ||U2^T v|| / ||v||.
  double bottom_cos(const Vector& v) const;
};

/// Full symmetric eigendecomposition. Dense and diagonal representations
/// only; the diagonal path sorts entries directly.
SpectralInfo sym_eig(const SymOperator& op, const Tolerances& tol = {});

/// Minimum-norm least-squares application of the pseudoinverse of a
/// symmetric matrix: sum over |sigma_i| > rank_tol * max|sigma| of
/// (v_i^T rhs / sigma_i) v_i. rank_tol <= 0 selects n*eps*max|sigma|.
Vector pinv_apply(const Matrix& mat, const Vector& rhs, double rank_tol = -1.0);

/// Largest eigenvalue of diag(d) - rho * v v^T with rho >= 0, via the
/// rank-one secular equation with deflation. O(n log) after setup.
double dpr1_downdate_max_eigenvalue(const Vector& d, const Vector& v, double rho);

/// Eigen-decomposition of a symmetric tridiagonal matrix (diag, subdiag).
/// Returns ascending eigenvalues and, when requested, the eigenvector matrix.
void tridiag_eig(const Vector& diag, const Vector& subdiag, Vector& values,
                 Matrix* vectors);

}  // namespace trscond
