#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace phykrig {

// Random Fourier feature map approximating a unit-variance RBF kernel with an
// isotropic lengthscale l:
//
//   phi_j(x) = cos(-omega_j . x + b_j),  omega_j ~ N(0, I / l^2),  b_j ~ U[0, 2 pi)
//   Phi(x)   = sqrt(2 / D) [phi_1(x), ..., phi_D(x)]
//
// so that E[Phi(x) . Phi(y)] = exp(-|x - y|^2 / (2 l^2)).
struct RFFMap {
  Eigen::MatrixXd omega;  // D x d spectral frequencies
  Eigen::VectorXd phase;  // D phase offsets in [0, 2 pi)
  double lengthscale = 1.0;

  int feature_count() const { return static_cast<int>(omega.rows()); }
  int input_dim() const { return static_cast<int>(omega.cols()); }
};

// Deterministic in (input_dim, feature_count, lengthscale, seed). Throws
// std::invalid_argument for non-positive dimensions or lengthscale.
RFFMap make_rff_map(int input_dim, int feature_count, double lengthscale, std::uint64_t seed);

// Feature matrix for the rows of X: n x D, entries in [-sqrt(2/D), sqrt(2/D)].
Eigen::MatrixXd rff_features(const RFFMap& map, const Eigen::MatrixXd& X);

}  // namespace phykrig
