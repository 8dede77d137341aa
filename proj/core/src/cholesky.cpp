#include "phykrig/cholesky.hpp"

#include <cmath>
#include <stdexcept>

#include "phykrig/errors.hpp"

namespace phykrig {

double CholeskyFactor::log_det() const {
  return 2.0 * lower_.diagonal().array().log().sum();
}

Eigen::MatrixXd CholeskyFactor::solve(const Eigen::MatrixXd& B) const {
  Eigen::MatrixXd Y = lower_.triangularView<Eigen::Lower>().solve(B);
  return lower_.transpose().triangularView<Eigen::Upper>().solve(Y);
}

Eigen::MatrixXd CholeskyFactor::forward_solve(const Eigen::MatrixXd& B) const {
  return lower_.triangularView<Eigen::Lower>().solve(B);
}

CholeskyFactor cholesky_factor(const Eigen::MatrixXd& A, const JitterPolicy& policy) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("cholesky_factor: matrix must be square");
  }
  if (!A.allFinite()) {
    throw std::invalid_argument("cholesky_factor: matrix has non-finite entries");
  }
  const double mean_diag = A.diagonal().mean();
  double scale = policy.initial_scale;
  double jitter = scale * mean_diag;
  // Always add the starting jitter; escalate on failure.
  while (true) {
    Eigen::MatrixXd Aj = A;
    Aj.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(Aj);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd L = llt.matrixL();
      if (L.diagonal().minCoeff() > 0.0 && L.allFinite()) {
        return CholeskyFactor(std::move(L), jitter);
      }
    }
    scale *= policy.step;
    if (scale > policy.max_scale * (1.0 + 1e-12)) {
      throw NumericalError("cholesky_factor: matrix not positive definite after jitter escalation",
                           jitter);
    }
    jitter = scale * mean_diag;
  }
}

CholeskySolveResult cholesky_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                   const JitterPolicy& policy) {
  if (A.rows() != B.rows()) {
    throw std::invalid_argument("cholesky_solve: row counts of A and B differ");
  }
  CholeskyFactor factor = cholesky_factor(A, policy);
  return CholeskySolveResult{factor.solve(B), std::move(factor)};
}

}  // namespace phykrig
