#include "linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace trscond {

double SymOperator::norm_estimate() const {
  switch (rep_) {
    case Rep::Diagonal:
      return diag_->cwiseAbs().maxCoeff();
    case Rep::Dense:
      return dense_->cwiseAbs().rowwise().sum().maxCoeff();
    case Rep::MatrixFree: {
      if (norm_hint_ > 0.0) return norm_hint_;
      // few power-iteration sweeps with a fixed deterministic start
      Vector v = Vector::LinSpaced(n_, 1.0, 2.0).normalized();
      double est = 0.0;
      for (int sweep = 0; sweep < 8; ++sweep) {
        Vector w = apply(v);
        est = w.norm();
        if (est == 0.0) return 0.0;
        v = w / est;
      }
      return est;
    }
  }
  return 0.0;
}

Vector SpectralInfo::to_eigenbasis(const Vector& v) const {
  if (basis) return basis->transpose() * v;
  Vector c(dim());
  for (Index i = 0; i < dim(); ++i) c(i) = v(perm[i]);
  return c;
}

Vector SpectralInfo::from_eigenbasis(const Vector& c) const {
  if (basis) return (*basis) * c;
  Vector v(dim());
  for (Index i = 0; i < dim(); ++i) v(perm[i]) = c(i);
  return v;
}

Matrix SpectralInfo::bottom_basis() const {
  const Index n = dim();
  const Index s = multiplicity_s;
  if (basis) return basis->rightCols(s);
  Matrix u2 = Matrix::Zero(n, s);
  for (Index j = 0; j < s; ++j) u2(perm[n - s + j], j) = 1.0;
  return u2;
}

double SpectralInfo::bottom_cos(const Vector& v) const {
  const double nv = v.norm();
  if (nv == 0.0) fail(ErrorCode::InvalidArgument, "cos angle of zero vector");
  Vector c = to_eigenbasis(v);
  return c.tail(multiplicity_s).norm() / nv;
}

namespace {

int bottom_cluster_size(const Vector& desc, double cluster_tol, double norm) {
  const Index n = desc.size();
  const double width = cluster_tol * std::max(1.0, norm);
  const double amin = desc(n - 1);
  int s = 1;
  while (s < n && desc(n - 1 - s) - amin <= width) ++s;
  return s;
}

}  // namespace

SpectralInfo sym_eig(const SymOperator& op, const Tolerances& tol) {
  SpectralInfo info;
  const Index n = op.dim();
  switch (op.rep()) {
    case Rep::Diagonal: {
      const Vector& d = op.diag();
      info.perm.resize(n);
      std::iota(info.perm.begin(), info.perm.end(), Index{0});
      std::stable_sort(info.perm.begin(), info.perm.end(),
                       [&](Index a, Index b) { return d(a) > d(b); });
      info.eigenvalues.resize(n);
      for (Index i = 0; i < n; ++i) info.eigenvalues(i) = d(info.perm[i]);
      break;
    }
    case Rep::Dense: {
      Eigen::SelfAdjointEigenSolver<Matrix> es(op.dense_matrix());
      if (es.info() != Eigen::Success)
        fail(ErrorCode::NonConvergence, "symmetric eigensolver did not converge");
      // Eigen returns ascending order; flip to descending.
      info.eigenvalues = es.eigenvalues().reverse();
      info.basis = es.eigenvectors().rowwise().reverse();
      break;
    }
    case Rep::MatrixFree:
      fail(ErrorCode::UnsupportedRepresentation,
           "sym_eig requires a dense or diagonal operator");
  }
  info.norm = std::max(std::abs(info.eigenvalues(0)), std::abs(info.eigenvalues(n - 1)));
  info.multiplicity_s = bottom_cluster_size(info.eigenvalues, tol.cluster_tol, info.norm);
  return info;
}

Vector pinv_apply(const Matrix& mat, const Vector& rhs, double rank_tol) {
  if (mat.rows() != mat.cols() || mat.rows() != rhs.size())
    fail(ErrorCode::InvalidArgument, "pinv_apply shape mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat);
  if (es.info() != Eigen::Success)
    fail(ErrorCode::NonConvergence, "symmetric eigensolver did not converge");
  const Vector& w = es.eigenvalues();
  const double smax = w.cwiseAbs().maxCoeff();
  const double cut = (rank_tol > 0.0 ? rank_tol : double(mat.rows()) *
                                           std::numeric_limits<double>::epsilon()) *
                     smax;
  Vector c = es.eigenvectors().transpose() * rhs;
  for (Index i = 0; i < w.size(); ++i)
    c(i) = std::abs(w(i)) > cut ? c(i) / w(i) : 0.0;
  return es.eigenvectors() * c;
}

double dpr1_downdate_max_eigenvalue(const Vector& d, const Vector& v, double rho) {
  const Index n = d.size();
  if (v.size() != n || n == 0) fail(ErrorCode::InvalidArgument, "dpr1 shape mismatch");
  if (rho < 0.0) fail(ErrorCode::InvalidArgument, "dpr1 expects a downdate (rho >= 0)");
  const double scale = std::max(d.cwiseAbs().maxCoeff(), rho * v.squaredNorm());
  if (rho == 0.0 || v.squaredNorm() == 0.0 || scale == 0.0) return d.maxCoeff();

  // split into active entries and deflated ones (negligible v component)
  const double deflate = 1e-15 * v.cwiseAbs().maxCoeff();
  std::vector<std::pair<double, double>> active;  // (d_i, v_i^2)
  double best_deflated = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    if (std::abs(v(i)) <= deflate)
      best_deflated = std::max(best_deflated, d(i));
    else
      active.push_back({d(i), v(i) * v(i)});
  }
  if (active.empty()) return best_deflated;
  std::sort(active.begin(), active.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  // merge numerically coincident poles
  std::vector<std::pair<double, double>> poles;
  for (const auto& p : active) {
    if (!poles.empty() && poles.back().first - p.first <= 1e-15 * std::max(1.0, scale))
      poles.back().second += p.second;
    else
      poles.push_back(p);
  }

  const double d1 = poles[0].first;
  double lo;
  if (poles.size() == 1) {
    // single pole: eigenvalue d1 - rho*v1^2 exactly
    return std::max(best_deflated, d1 - rho * poles[0].second);
  }
  lo = poles[1].first;

  // f(mu) = 1 - rho * sum v_i^2 / (d_i - mu); strictly decreasing on (lo, d1),
  // +inf at lo^+ and -inf at d1^-, so the top eigenvalue is its unique root there.
  auto eval = [&](double mu, double& f, double& df) {
    f = 1.0;
    df = 0.0;
    for (const auto& p : poles) {
      const double den = p.first - mu;
      f -= rho * p.second / den;
      df -= rho * p.second / (den * den);
    }
  };

  double a = lo, b = d1;
  double mu = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    double f, df;
    eval(mu, f, df);
    if (f > 0.0)
      a = mu;
    else
      b = mu;
    double step_mu = mu - f / df;  // Newton; df < 0 always
    if (!(step_mu > a && step_mu < b)) step_mu = 0.5 * (a + b);
    if (std::abs(step_mu - mu) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                      std::max(1.0, std::abs(mu))) {
      mu = step_mu;
      break;
    }
    mu = step_mu;
  }
  return std::max(best_deflated, mu);
}

void tridiag_eig(const Vector& diag, const Vector& subdiag, Vector& values,
                 Matrix* vectors) {
  const Index k = diag.size();
  if (subdiag.size() != std::max<Index>(k - 1, 0))
    fail(ErrorCode::InvalidArgument, "tridiag_eig shape mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  es.computeFromTridiagonal(diag, subdiag,
                            vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    fail(ErrorCode::NonConvergence, "tridiagonal eigensolver did not converge");
  values = es.eigenvalues();  // ascending
  if (vectors) *vectors = es.eigenvectors();
}

}  // namespace trscond
