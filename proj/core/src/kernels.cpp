#include "phykrig/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace phykrig {

namespace {
void check_dims(const Eigen::MatrixXd& X1, const Eigen::MatrixXd& X2,
                const KernelParams& params) {
  if (X1.cols() != X2.cols()) {
    throw std::invalid_argument("rbf_kernel: X1 and X2 have different input dimensions");
  }
  if (params.log_lengthscales.size() != X1.cols()) {
    throw std::invalid_argument("rbf_kernel: lengthscale count does not match input dimension");
  }
}
}  // namespace

Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& X1, const Eigen::MatrixXd& X2,
                           const KernelParams& params) {
  check_dims(X1, X2, params);
  const Eigen::VectorXd inv_l = (-params.log_lengthscales).array().exp();
  // Scale columns once, then take explicit row differences. The direct
  // difference keeps k(x, x) exactly s^2 for identical rows (no cancellation).
  const Eigen::MatrixXd A = X1 * inv_l.asDiagonal();
  const Eigen::MatrixXd B = X2 * inv_l.asDiagonal();
  const double s2 = params.signal_variance();

  Eigen::MatrixXd K(A.rows(), B.rows());
  for (Eigen::Index j = 0; j < B.rows(); ++j) {
    K.col(j) = (A.rowwise() - B.row(j)).rowwise().squaredNorm();
  }
  K = (K * -0.5).array().exp() * s2;
  return K;
}

KernelWithGrads rbf_kernel_with_grads(const Eigen::MatrixXd& X, const KernelParams& params) {
  check_dims(X, X, params);
  const int d = static_cast<int>(X.cols());
  const Eigen::VectorXd inv_l = (-params.log_lengthscales).array().exp();
  const Eigen::MatrixXd A = X * inv_l.asDiagonal();

  KernelWithGrads out;
  out.value = rbf_kernel(X, X, params);
  out.dlog_lengthscale.reserve(d);
  for (int k = 0; k < d; ++k) {
    // d k / d log l_k = k * ((x_k - x'_k) / l_k)^2
    Eigen::MatrixXd D2(A.rows(), A.rows());
    for (Eigen::Index j = 0; j < A.rows(); ++j) {
      D2.col(j) = (A.col(k).array() - A(j, k)).square();
    }
    out.dlog_lengthscale.push_back(out.value.cwiseProduct(D2));
  }
  return out;
}

}  // namespace phykrig
