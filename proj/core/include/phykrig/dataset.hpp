#pragma once

#include <Eigen/Dense>

namespace phykrig {

// Per-column affine map x -> (x - shift) / scale with scales floored at
// min_scale so constant columns stay finite.
struct ColumnTransform {
  Eigen::VectorXd shift, scale;

  static ColumnTransform identity(int dim);
  // Center and scale by per-column std (inputs).
  static ColumnTransform standardize(const Eigen::MatrixXd& X, double min_scale = 1e-8);
  // Scale by per-column std without centering (residuals, so that a zero
  // residual stays exactly zero and the prior mean is preserved far from data).
  static ColumnTransform scale_only(const Eigen::MatrixXd& X, double min_scale = 1e-8);

  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd apply_vector(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd invert(const Eigen::MatrixXd& Z) const;
  int dim() const { return static_cast<int>(shift.size()); }
};

// Raw supervised data: inputs X (N x d) against outputs y (N x m). N = 0 is
// legal (prior-only fits for the models that support it); shapes must agree
// and all entries must be finite.
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::MatrixXd y;

  Dataset() = default;
  Dataset(Eigen::MatrixXd X_, Eigen::MatrixXd y_);
  static Dataset empty(int input_dim, int output_dim);

  Eigen::Index rows() const { return X.rows(); }
  int input_dim() const { return static_cast<int>(X.cols()); }
  int output_dim() const { return static_cast<int>(y.cols()); }
  void validate() const;  // throws std::invalid_argument
};

}  // namespace phykrig
