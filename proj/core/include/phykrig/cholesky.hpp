#pragma once

#include <Eigen/Dense>

namespace phykrig {

// Jitter escalation for nearly-singular symmetric positive definite systems:
// start at initial_scale * mean(diag), multiply by step until max_scale *
// mean(diag), then give up with a NumericalError.
struct JitterPolicy {
  double initial_scale = 1e-8;
  double max_scale = 1e-2;
  double step = 10.0;
};

class CholeskyFactor {
public:
  CholeskyFactor() = default;
  CholeskyFactor(Eigen::MatrixXd lower, double jitter_used)
      : lower_(std::move(lower)), jitter_used_(jitter_used) {}

  const Eigen::MatrixXd& lower() const { return lower_; }
  double jitter_used() const { return jitter_used_; }
  Eigen::Index dim() const { return lower_.rows(); }

  // log det(L L^T) = 2 sum_i log L_ii
  double log_det() const;

  // (L L^T)^{-1} B via two triangular solves.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& B) const;

  // L^{-1} B (handy for predictive variances).
  Eigen::MatrixXd forward_solve(const Eigen::MatrixXd& B) const;

private:
  Eigen::MatrixXd lower_;
  double jitter_used_ = 0.0;
};

// Factor A + jitter*I, escalating jitter per the policy. A must be square and
// symmetric; throws std::invalid_argument otherwise and NumericalError (with
// the last jitter attempted) if no jitter level in the schedule succeeds.
CholeskyFactor cholesky_factor(const Eigen::MatrixXd& A, const JitterPolicy& policy = {});

// Solve (A + jitter*I) X = B. Returns the solution and the factor that was
// used (whose jitter_used records what was added to the diagonal).
struct CholeskySolveResult {
  Eigen::MatrixXd solution;
  CholeskyFactor factor;
};
CholeskySolveResult cholesky_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                   const JitterPolicy& policy = {});

}  // namespace phykrig
