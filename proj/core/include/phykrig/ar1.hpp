#pragma once

#include <memory>

#include "phykrig/gp_surrogate.hpp"
#include "phykrig/surrogate.hpp"

namespace phykrig {

// Classic two-stage auto-regressive co-kriging in its recursive form:
//
//   stage 1: a zero-mean GP fit to physics evaluations at N1 design points
//            spread over the input box (the physics model is treated as the
//            cheap low-fidelity source);
//   stage 2: y = rho * mu_1(x) + delta(x) + noise, with the constant rho
//            optimized jointly with delta's kernel and the noise on the NLML
//            of the stage-2 residuals.
//
// Prediction: mean rho * mu_1(x) + mu_delta(x), variance rho^2 * var_1(x) +
// var_delta(x). Unlike the input-dependent adjustment models, the observed-
// data factorization here never couples the N1 low-fidelity points with the
// N2 observations.
class Ar1Surrogate final : public SurrogateModel {
public:
  static std::unique_ptr<Ar1Surrogate> fit(const Dataset& data,
                                           std::shared_ptr<const PhysicsModel> physics,
                                           const FitConfig& config);

  ModelKind kind() const override { return ModelKind::Ar1; }
  int input_dim() const override { return low_fi_->input_dim(); }
  int output_dim() const override { return 1; }
  Eigen::Index training_count() const override { return X_std_.rows(); }
  PredictiveDistribution predict(const Eigen::MatrixXd& X) const override;
  void save(std::ostream& out) const override;

  double rho() const { return rho_; }
  const AdjustmentGp& low_fidelity_gp() const { return *low_fi_; }
  double fit_nlml() const { return fit_nlml_; }
  Eigen::Index factor_dim() const { return chol_.dim(); }

  static std::unique_ptr<Ar1Surrogate> from_parts(std::unique_ptr<AdjustmentGp> low_fi,
                                                  double rho, ColumnTransform input_transform,
                                                  double residual_scale, Eigen::MatrixXd X_std,
                                                  Eigen::VectorXd mu1_train, Eigen::VectorXd y_train,
                                                  Eigen::VectorXd theta);

private:
  Ar1Surrogate() = default;
  void finalize();

  std::unique_ptr<AdjustmentGp> low_fi_;
  double rho_ = 1.0;
  ColumnTransform input_transform_;    // stage-2 input standardization
  double residual_scale_ = 1.0;        // fixed from the rho = 1 residuals
  Eigen::MatrixXd X_std_;
  Eigen::VectorXd mu1_train_;          // stage-1 means at the observations (original units)
  Eigen::VectorXd y_train_;            // observations (original units)
  Eigen::VectorXd theta_;              // [delta kernel, log noise]
  CholeskyFactor chol_;
  Eigen::VectorXd alpha_;
  double fit_nlml_ = 0.0;
};

}  // namespace phykrig
