#pragma once

#include <Eigen/Dense>
#include <vector>

namespace phykrig {

// ARD-RBF hyperparameters, kept in log space so the exponentiated values are
// strictly positive no matter what an optimizer does to them.
//
//   k(x, x') = exp(log_signal_variance)
//              * exp(-1/2 * sum_k ((x_k - x'_k) / l_k)^2),   l_k = exp(log_lengthscales[k])
struct KernelParams {
  Eigen::VectorXd log_lengthscales;   // one per input dimension
  double log_signal_variance = 0.0;   // log of the signal variance s^2

  static KernelParams defaults(int input_dim) {
    KernelParams p;
    p.log_lengthscales = Eigen::VectorXd::Zero(input_dim);
    p.log_signal_variance = 0.0;
    return p;
  }

  int input_dim() const { return static_cast<int>(log_lengthscales.size()); }
  Eigen::VectorXd lengthscales() const { return log_lengthscales.array().exp(); }
  double signal_variance() const { return std::exp(log_signal_variance); }
};

// Observation noise, also stored in log space. The *standard deviation* is
// exp(log_noise_std); the variance added to covariance diagonals is its square.
struct NoiseParam {
  double log_noise_std = 0.0;

  static NoiseParam defaults() { return NoiseParam{std::log(0.1)}; }
  double noise_std() const { return std::exp(log_noise_std); }
  double noise_variance() const { return std::exp(2.0 * log_noise_std); }
};

// Dense cross-covariance between the rows of X1 (n x d) and X2 (m x d).
// Throws std::invalid_argument on dimension mismatch.
Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& X1, const Eigen::MatrixXd& X2,
                           const KernelParams& params);

// Kernel matrix together with its derivatives with respect to each
// log-lengthscale. The derivative w.r.t. log_signal_variance is the kernel
// matrix itself (k is proportional to s^2), so it is not stored.
struct KernelWithGrads {
  Eigen::MatrixXd value;
  std::vector<Eigen::MatrixXd> dlog_lengthscale;  // input_dim matrices
};

KernelWithGrads rbf_kernel_with_grads(const Eigen::MatrixXd& X, const KernelParams& params);

}  // namespace phykrig
