#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "phykrig/cholesky.hpp"
#include "phykrig/kernels.hpp"

namespace phykrig {

// Covariance of the observed residuals for the GP family. Two optional RBF
// channels plus observation noise:
//
//   K = [scale channel]  diag(fp) k_rho(X, X) diag(fp)
//     + [bias channel]   k_delta(X, X)
//     + exp(2 log_noise_std) I
//
// The scale channel multiplies the physics prediction fp pointwise (a GP on a
// multiplicative correction), the bias channel is an additive correction.
// Plain GP regressors are the bias channel alone; scale-only and full
// scale+bias adjustments toggle the flags.
//
// Flat parameter vector layout (all log space):
//   [rho:   log_lengthscales (d), log_signal_variance]   if use_rho
//   [delta: log_lengthscales (d), log_signal_variance]   if use_delta
//   [log_noise_std]
struct AdjustmentCovariance {
  int input_dim = 0;
  bool use_rho = false;
  bool use_delta = true;
  Eigen::VectorXd fp;  // physics values at the training inputs; required if use_rho

  int param_count() const {
    return (use_rho ? input_dim + 1 : 0) + (use_delta ? input_dim + 1 : 0) + 1;
  }

  // Default initialization: log-lengthscales 0, log signal variance 0,
  // log noise std log(0.1).
  Eigen::VectorXd default_params() const;

  KernelParams rho_params(const Eigen::VectorXd& theta) const;
  KernelParams delta_params(const Eigen::VectorXd& theta) const;
  NoiseParam noise_param(const Eigen::VectorXd& theta) const;

  Eigen::MatrixXd build(const Eigen::MatrixXd& X, const Eigen::VectorXd& theta) const;
  // K plus dK/dtheta_i for every parameter, in the layout order above.
  void build_with_grads(const Eigen::MatrixXd& X, const Eigen::VectorXd& theta,
                        Eigen::MatrixXd& K, std::vector<Eigen::MatrixXd>& dK) const;
};

// Negative log marginal likelihood of residuals r under N(0, K):
//   1/2 r^T K^{-1} r + 1/2 log|K| + N/2 log(2 pi)
// The matrix form factors K internally (standard jitter policy).
double nlml(const Eigen::VectorXd& y_residual, const Eigen::MatrixXd& K);
double nlml_from_factor(const Eigen::VectorXd& y_residual, const CholeskyFactor& factor);

// Gradient via the trace identity: dNLML/dtheta_i = 1/2 tr((K^{-1} - a a^T) dK_i)
// with a = K^{-1} r.
Eigen::VectorXd nlml_gradient_from_parts(const Eigen::VectorXd& y_residual,
                                         const CholeskyFactor& factor,
                                         const std::vector<Eigen::MatrixXd>& dK);

// Value and gradient of the NLML through an assembled covariance.
std::pair<double, Eigen::VectorXd> nlml_with_gradient(const AdjustmentCovariance& cov,
                                                      const Eigen::MatrixXd& X,
                                                      const Eigen::VectorXd& y_residual,
                                                      const Eigen::VectorXd& theta);

}  // namespace phykrig
