#pragma once

#include <memory>

#include "phykrig/cholesky.hpp"
#include "phykrig/likelihood.hpp"
#include "phykrig/surrogate.hpp"

namespace phykrig {

// Exact-GP member of the family. One class covers:
//   ZeroMeanGp  - bias channel only, prior mean 0 (no physics)
//   PhyMeanGp   - bias channel only, prior mean f_p
//   GpBias      - additive-only adjustment; algebraically identical to
//                 PhyMeanGp and implemented through the same path
//   GpScale     - scale channel only, prior mean f_p
//   Cka         - scale + bias channels, prior mean f_p
//
// Residuals y - prior are scaled per column (never centered, so predictions
// revert to the prior mean far from data); inputs are standardized.
class AdjustmentGp final : public SurrogateModel {
public:
  static std::unique_ptr<AdjustmentGp> fit(ModelKind kind, const Dataset& data,
                                           std::shared_ptr<const PhysicsModel> physics,
                                           const FitConfig& config);

  ModelKind kind() const override { return kind_; }
  int input_dim() const override { return static_cast<int>(input_transform_.shift.size()); }
  int output_dim() const override { return 1; }
  Eigen::Index training_count() const override { return X_std_.rows(); }
  PredictiveDistribution predict(const Eigen::MatrixXd& X) const override;
  void save(std::ostream& out) const override;

  // Diagnostics (original units unless noted).
  const Eigen::VectorXd& hyperparams() const { return theta_; }       // log space
  double fit_nlml() const { return fit_nlml_; }                        // standardized space
  double noise_variance() const;                                       // original units
  double prior_variance_at(const Eigen::VectorXd& x) const;            // original units, without noise
  Eigen::VectorXd kernel_lengthscales_original(bool rho_channel) const;
  Eigen::Index factor_dim() const { return chol_.dim(); }
  const ColumnTransform& input_transform() const { return input_transform_; }
  double residual_scale() const { return residual_scale_; }

  // Used by the loader; rebuilds the factorization from stored pieces.
  static std::unique_ptr<AdjustmentGp> from_parts(ModelKind kind,
                                                  std::shared_ptr<const PhysicsModel> physics,
                                                  ColumnTransform input_transform,
                                                  double residual_scale, Eigen::MatrixXd X_std,
                                                  Eigen::VectorXd resid_std,
                                                  Eigen::VectorXd fp_train,
                                                  Eigen::VectorXd theta);

private:
  AdjustmentGp() = default;
  void finalize();  // builds covariance, factor, alpha, fit_nlml
  AdjustmentCovariance covariance() const;
  bool use_rho() const;
  bool use_delta() const;
  bool has_physics_mean() const { return kind_ != ModelKind::ZeroMeanGp; }

  ModelKind kind_ = ModelKind::ZeroMeanGp;
  std::shared_ptr<const PhysicsModel> physics_;
  ColumnTransform input_transform_;
  double residual_scale_ = 1.0;
  Eigen::MatrixXd X_std_;      // standardized training inputs
  Eigen::VectorXd resid_std_;  // scaled residuals
  Eigen::VectorXd fp_train_;   // physics values at training inputs (original units)
  Eigen::VectorXd theta_;      // flat hyperparameters, log space
  CholeskyFactor chol_;
  Eigen::VectorXd alpha_;
  double fit_nlml_ = 0.0;

  friend class Ar1Surrogate;
};

}  // namespace phykrig
