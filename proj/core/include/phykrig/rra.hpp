#pragma once

#include <memory>

#include "phykrig/rff.hpp"
#include "phykrig/surrogate.hpp"

namespace phykrig {

// A deterministic function drawn from the RRA weight posterior. Evaluating it
// twice at the same input always gives the same value.
class SampledAdjustment {
public:
  SampledAdjustment(std::shared_ptr<const PhysicsModel> physics, ColumnTransform input_transform,
                    double residual_scale, RFFMap map_rho, RFFMap map_delta,
                    Eigen::VectorXd beta);

  Eigen::VectorXd evaluate(const Eigen::MatrixXd& X) const;
  double operator()(const Eigen::VectorXd& x) const;

private:
  std::shared_ptr<const PhysicsModel> physics_;
  ColumnTransform input_transform_;
  double residual_scale_;
  RFFMap map_rho_, map_delta_;
  Eigen::VectorXd beta_;
};

// Ridge regression adjustment: the residual y - f_p is regressed on the
// concatenation of a scale block (features times the physics prediction) and
// a bias block, each built from its own random Fourier feature map:
//
//   A(x) = [Phi_rho(x) * f_p(x), Phi_delta(x)]           (2D columns)
//   beta_hat = (A^T A + lambda I)^{-1} A^T r
//   Sigma_hat = (A^T A + lambda I)^{-1} * sigma_hat^2
//
// with sigma_hat^2 the empirical variance of the fit residuals. Shrinking
// beta toward zero reverts predictions to f_p, mirroring the GP adjustment's
// unit-mean scale prior.
class RraSurrogate final : public SurrogateModel {
public:
  static std::unique_ptr<RraSurrogate> fit(const Dataset& data,
                                           std::shared_ptr<const PhysicsModel> physics,
                                           const FitConfig& config);

  ModelKind kind() const override { return ModelKind::Rra; }
  int input_dim() const override { return map_rho_.input_dim(); }
  int output_dim() const override { return 1; }
  Eigen::Index training_count() const override { return training_count_; }
  PredictiveDistribution predict(const Eigen::MatrixXd& X) const override;
  void save(std::ostream& out) const override;

  // Draw one deterministic function from the weight posterior beta ~
  // N(beta_hat, Sigma_hat). Throws NumericalError if Sigma_hat fails to
  // factor (not PSD within tolerance).
  SampledAdjustment sample_function(std::uint64_t seed) const;

  const Eigen::VectorXd& beta_mean() const { return beta_mean_; }
  const Eigen::MatrixXd& beta_covariance() const { return beta_cov_; }
  double sigma_hat_sq() const { return sigma_hat_sq_; }
  double lambda() const { return lambda_; }
  const RFFMap& map_rho() const { return map_rho_; }
  const RFFMap& map_delta() const { return map_delta_; }
  const ColumnTransform& input_transform() const { return input_transform_; }
  double residual_scale() const { return residual_scale_; }

  static std::unique_ptr<RraSurrogate> from_parts(std::shared_ptr<const PhysicsModel> physics,
                                                  ColumnTransform input_transform,
                                                  double residual_scale, RFFMap map_rho,
                                                  RFFMap map_delta, Eigen::VectorXd beta_mean,
                                                  Eigen::MatrixXd beta_cov, double sigma_hat_sq,
                                                  double lambda, Eigen::Index training_count);

private:
  RraSurrogate() = default;
  // Design matrix block [Phi_rho .* fp, Phi_delta] for transformed inputs.
  Eigen::MatrixXd design(const Eigen::MatrixXd& X_std, const Eigen::VectorXd& fp) const;

  std::shared_ptr<const PhysicsModel> physics_;
  ColumnTransform input_transform_;
  double residual_scale_ = 1.0;
  RFFMap map_rho_, map_delta_;
  Eigen::VectorXd beta_mean_;   // 2D
  Eigen::MatrixXd beta_cov_;    // 2D x 2D
  double sigma_hat_sq_ = 1.0;   // scaled-residual units
  double lambda_ = 1.0;
  Eigen::Index training_count_ = 0;
};

}  // namespace phykrig
