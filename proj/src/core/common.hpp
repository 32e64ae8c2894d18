#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace trscond {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class ErrorCode {
  InvalidArgument,
  UnsupportedRepresentation,
  NonConvergence,
  MaxIterations,
  DegenerateGradient,
  WrongCase,
  HardCaseInput,
  HardCaseEigvec,
  NotBoundary,
  PoleProximity,
  ZeroGap,
  RankMismatch,
  ContractionViolated,
  PreconditionViolated,
  RitzDegenerate,
  Breakdown,
  UnknownGenerator,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

/// Tolerance policy shared by the solver and the analysis routines.
/// Scale-dependent entries are multipliers; the consuming routine applies
/// the max(1, ||A||)-style scaling documented at the point of use.
struct Tolerances {
  double cluster_tol = 1e-10;      // bottom-cluster width, x max(1, ||A||)
  double secular_tol = 1e-13;      // relative bound on | ||x|| - Delta |
  double boundary_tol = 1e-10;     // relative boundary detection
  double hard_tol = 1e-12;         // threshold on cos(g, U2)
  double nearly_hard_tol = 1e-6;   // nearly-hard flag, x max(1, ||A||)
  double pole_tol = 1e-14;         // secular pole guard, x max(1, ||A||)
  double breakdown_tol = 1e-12;    // Lanczos breakdown, x ||A|| estimate
  double ritz_gap_tol = 1e-12;     // eta estimates, x max(1, |ritz_min|)
  int max_secular_iter = 200;
};

}  // namespace trscond
