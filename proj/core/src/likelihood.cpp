#include "phykrig/likelihood.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phykrig {

namespace {
constexpr double kHalfLog2Pi = 0.5 * 1.8378770664093454836;  // log(2 pi)
}

Eigen::VectorXd AdjustmentCovariance::default_params() const {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(param_count());
  theta(param_count() - 1) = std::log(0.1);
  return theta;
}

KernelParams AdjustmentCovariance::rho_params(const Eigen::VectorXd& theta) const {
  KernelParams p;
  p.log_lengthscales = theta.segment(0, input_dim);
  p.log_signal_variance = theta(input_dim);
  return p;
}

KernelParams AdjustmentCovariance::delta_params(const Eigen::VectorXd& theta) const {
  const int off = use_rho ? input_dim + 1 : 0;
  KernelParams p;
  p.log_lengthscales = theta.segment(off, input_dim);
  p.log_signal_variance = theta(off + input_dim);
  return p;
}

NoiseParam AdjustmentCovariance::noise_param(const Eigen::VectorXd& theta) const {
  return NoiseParam{theta(param_count() - 1)};
}

Eigen::MatrixXd AdjustmentCovariance::build(const Eigen::MatrixXd& X,
                                            const Eigen::VectorXd& theta) const {
  if (theta.size() != param_count()) {
    throw std::invalid_argument("AdjustmentCovariance: parameter vector has wrong length");
  }
  if (use_rho && fp.size() != X.rows()) {
    throw std::invalid_argument("AdjustmentCovariance: fp length does not match data");
  }
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  if (use_rho) {
    K += fp.asDiagonal() * rbf_kernel(X, X, rho_params(theta)) * fp.asDiagonal();
  }
  if (use_delta) {
    K += rbf_kernel(X, X, delta_params(theta));
  }
  K.diagonal().array() += noise_param(theta).noise_variance();
  return K;
}

void AdjustmentCovariance::build_with_grads(const Eigen::MatrixXd& X,
                                            const Eigen::VectorXd& theta, Eigen::MatrixXd& K,
                                            std::vector<Eigen::MatrixXd>& dK) const {
  if (theta.size() != param_count()) {
    throw std::invalid_argument("AdjustmentCovariance: parameter vector has wrong length");
  }
  const Eigen::Index n = X.rows();
  K = Eigen::MatrixXd::Zero(n, n);
  dK.clear();
  dK.reserve(param_count());

  if (use_rho) {
    const Eigen::MatrixXd outer_fp = fp * fp.transpose();
    KernelWithGrads kg = rbf_kernel_with_grads(X, rho_params(theta));
    Eigen::MatrixXd channel = kg.value.cwiseProduct(outer_fp);
    for (auto& g : kg.dlog_lengthscale) dK.push_back(g.cwiseProduct(outer_fp));
    dK.push_back(channel);  // d/d log_signal_variance
    K += channel;
  }
  if (use_delta) {
    KernelWithGrads kg = rbf_kernel_with_grads(X, delta_params(theta));
    for (auto& g : kg.dlog_lengthscale) dK.push_back(std::move(g));
    dK.push_back(kg.value);
    K += dK.back();
  }
  const double noise_var = noise_param(theta).noise_variance();
  K.diagonal().array() += noise_var;
  // d sigma^2 / d log_noise_std = 2 sigma^2
  Eigen::MatrixXd dnoise = Eigen::MatrixXd::Zero(n, n);
  dnoise.diagonal().setConstant(2.0 * noise_var);
  dK.push_back(std::move(dnoise));
}

double nlml(const Eigen::VectorXd& y_residual, const Eigen::MatrixXd& K) {
  if (y_residual.size() != K.rows()) {
    throw std::invalid_argument("nlml: residual length does not match covariance");
  }
  return nlml_from_factor(y_residual, cholesky_factor(K));
}

double nlml_from_factor(const Eigen::VectorXd& y_residual, const CholeskyFactor& factor) {
  const double n = static_cast<double>(y_residual.size());
  const Eigen::VectorXd alpha = factor.solve(y_residual);
  return 0.5 * y_residual.dot(alpha) + 0.5 * factor.log_det() + n * kHalfLog2Pi;
}

Eigen::VectorXd nlml_gradient_from_parts(const Eigen::VectorXd& y_residual,
                                         const CholeskyFactor& factor,
                                         const std::vector<Eigen::MatrixXd>& dK) {
  const Eigen::Index n = y_residual.size();
  const Eigen::VectorXd alpha = factor.solve(y_residual);
  const Eigen::MatrixXd Kinv = factor.solve(Eigen::MatrixXd::Identity(n, n));
  Eigen::VectorXd grad(static_cast<Eigen::Index>(dK.size()));
  for (std::size_t i = 0; i < dK.size(); ++i) {
    const double trace_term = Kinv.cwiseProduct(dK[i]).sum();
    const double data_term = alpha.dot(dK[i] * alpha);
    grad(static_cast<Eigen::Index>(i)) = 0.5 * (trace_term - data_term);
  }
  return grad;
}

std::pair<double, Eigen::VectorXd> nlml_with_gradient(const AdjustmentCovariance& cov,
                                                      const Eigen::MatrixXd& X,
                                                      const Eigen::VectorXd& y_residual,
                                                      const Eigen::VectorXd& theta) {
  Eigen::MatrixXd K;
  std::vector<Eigen::MatrixXd> dK;
  cov.build_with_grads(X, theta, K, dK);
  CholeskyFactor factor = cholesky_factor(K);
  return {nlml_from_factor(y_residual, factor),
          nlml_gradient_from_parts(y_residual, factor, dK)};
}

}  // namespace phykrig
