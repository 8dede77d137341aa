#include "phykrig/rra.hpp"

#include <cmath>
#include <stdexcept>

#include "phykrig/cholesky.hpp"
#include "phykrig/errors.hpp"
#include "phykrig/rng.hpp"

namespace phykrig {

SampledAdjustment::SampledAdjustment(std::shared_ptr<const PhysicsModel> physics,
                                     ColumnTransform input_transform, double residual_scale,
                                     RFFMap map_rho, RFFMap map_delta, Eigen::VectorXd beta)
    : physics_(std::move(physics)),
      input_transform_(std::move(input_transform)),
      residual_scale_(residual_scale),
      map_rho_(std::move(map_rho)),
      map_delta_(std::move(map_delta)),
      beta_(std::move(beta)) {}

Eigen::VectorXd SampledAdjustment::evaluate(const Eigen::MatrixXd& X) const {
  const Eigen::VectorXd fp = physics_->evaluate_batch(X).col(0);
  const Eigen::MatrixXd X_std = input_transform_.apply(X);
  const int D = map_rho_.feature_count();
  const Eigen::MatrixXd Phi_rho = rff_features(map_rho_, X_std);
  const Eigen::MatrixXd Phi_delta = rff_features(map_delta_, X_std);
  const Eigen::VectorXd adj = (Phi_rho.array().colwise() * fp.array()).matrix() * beta_.head(D) +
                              Phi_delta * beta_.tail(map_delta_.feature_count());
  return fp + residual_scale_ * adj;
}

double SampledAdjustment::operator()(const Eigen::VectorXd& x) const {
  return evaluate(x.transpose())(0);
}

Eigen::MatrixXd RraSurrogate::design(const Eigen::MatrixXd& X_std,
                                     const Eigen::VectorXd& fp) const {
  const Eigen::MatrixXd Phi_rho = rff_features(map_rho_, X_std);
  const Eigen::MatrixXd Phi_delta = rff_features(map_delta_, X_std);
  Eigen::MatrixXd A(X_std.rows(), map_rho_.feature_count() + map_delta_.feature_count());
  A.leftCols(map_rho_.feature_count()) = Phi_rho.array().colwise() * fp.array();
  A.rightCols(map_delta_.feature_count()) = Phi_delta;
  return A;
}

std::unique_ptr<RraSurrogate> RraSurrogate::fit(const Dataset& data,
                                                std::shared_ptr<const PhysicsModel> physics,
                                                const FitConfig& config) {
  data.validate();
  if (data.output_dim() != 1) throw FitError("RraSurrogate: single-output models only");
  if (!physics) throw FitError("RraSurrogate: requires a physics model");
  if (physics->input_dim() != data.input_dim()) {
    throw FitError("RraSurrogate: physics model input dimension does not match data");
  }
  if (config.rra_feature_count < 1) throw ConfigError("RraSurrogate: feature count must be >= 1");
  if (!(config.rra_lambda > 0.0)) throw ConfigError("RraSurrogate: lambda must be > 0");

  auto model = std::unique_ptr<RraSurrogate>(new RraSurrogate());
  model->physics_ = std::move(physics);
  model->lambda_ = config.rra_lambda;
  model->training_count_ = data.rows();

  const Eigen::Index n = data.rows();
  const Eigen::VectorXd fp = n > 0 ? Eigen::VectorXd(model->physics_->evaluate_batch(data.X).col(0))
                                   : Eigen::VectorXd(0);
  const Eigen::VectorXd residual = n > 0 ? Eigen::VectorXd(data.y.col(0) - fp) : Eigen::VectorXd(0);

  model->input_transform_ = config.standardize_inputs
                                ? ColumnTransform::standardize(data.X)
                                : ColumnTransform::identity(data.input_dim());
  model->residual_scale_ = n > 0 ? ColumnTransform::scale_only(residual).scale(0) : 1.0;

  model->map_rho_ = make_rff_map(data.input_dim(), config.rra_feature_count,
                                 config.rra_lengthscale, mix_seed(config.seed, 0x44a));
  model->map_delta_ = make_rff_map(data.input_dim(), config.rra_feature_count,
                                   config.rra_lengthscale, mix_seed(config.seed, 0x44b));

  const int cols = 2 * config.rra_feature_count;
  if (n == 0) {
    model->beta_mean_ = Eigen::VectorXd::Zero(cols);
    model->sigma_hat_sq_ = 1.0;
    model->beta_cov_ =
        Eigen::MatrixXd::Identity(cols, cols) * (model->sigma_hat_sq_ / model->lambda_);
    return model;
  }

  const Eigen::MatrixXd X_std = model->input_transform_.apply(data.X);
  const Eigen::VectorXd r = residual / model->residual_scale_;
  const Eigen::MatrixXd A = model->design(X_std, fp);

  Eigen::MatrixXd G = A.transpose() * A;
  G.diagonal().array() += model->lambda_;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
  if (ldlt.info() != Eigen::Success) {
    throw NumericalError("RraSurrogate: normal equations failed to factor");
  }
  model->beta_mean_ = ldlt.solve(A.transpose() * r);

  const Eigen::VectorXd fit_resid = r - A * model->beta_mean_;
  model->sigma_hat_sq_ = fit_resid.squaredNorm() / static_cast<double>(n);

  Eigen::MatrixXd Ginv = ldlt.solve(Eigen::MatrixXd::Identity(cols, cols));
  Ginv = 0.5 * (Ginv + Ginv.transpose());  // re-symmetrize
  model->beta_cov_ = Ginv * model->sigma_hat_sq_;
  return model;
}

PredictiveDistribution RraSurrogate::predict(const Eigen::MatrixXd& Xq) const {
  if (Xq.cols() != input_dim()) {
    throw std::invalid_argument("RraSurrogate::predict: input dimension mismatch");
  }
  const Eigen::VectorXd fp = physics_->evaluate_batch(Xq).col(0);
  const Eigen::MatrixXd X_std = input_transform_.apply(Xq);
  const Eigen::MatrixXd A = design(X_std, fp);

  PredictiveDistribution out;
  out.mean = fp + residual_scale_ * (A * beta_mean_);
  const Eigen::VectorXd quad = (A * beta_cov_).cwiseProduct(A).rowwise().sum();
  out.variance = (quad.array() + sigma_hat_sq_).cwiseMax(0.0).matrix() *
                 (residual_scale_ * residual_scale_);
  return out;
}

SampledAdjustment RraSurrogate::sample_function(std::uint64_t seed) const {
  const Eigen::Index cols = beta_mean_.size();
  Eigen::VectorXd beta = beta_mean_;
  const double max_abs = beta_cov_.cwiseAbs().maxCoeff();
  if (max_abs > 0.0) {
    // Posterior covariance is PD by construction; a failure here means it has
    // degraded numerically and sampling would be meaningless.
    const CholeskyFactor factor = cholesky_factor(beta_cov_, JitterPolicy{1e-14, 1e-10, 10.0});
    Rng rng(mix_seed(seed, 0x5a3));
    Eigen::VectorXd z(cols);
    for (Eigen::Index i = 0; i < cols; ++i) z(i) = rng.normal();
    beta += factor.lower() * z;
  }
  return SampledAdjustment(physics_, input_transform_, residual_scale_, map_rho_, map_delta_,
                           std::move(beta));
}

std::unique_ptr<RraSurrogate> RraSurrogate::from_parts(
    std::shared_ptr<const PhysicsModel> physics, ColumnTransform input_transform,
    double residual_scale, RFFMap map_rho, RFFMap map_delta, Eigen::VectorXd beta_mean,
    Eigen::MatrixXd beta_cov, double sigma_hat_sq, double lambda, Eigen::Index training_count) {
  auto model = std::unique_ptr<RraSurrogate>(new RraSurrogate());
  model->physics_ = std::move(physics);
  model->input_transform_ = std::move(input_transform);
  model->residual_scale_ = residual_scale;
  model->map_rho_ = std::move(map_rho);
  model->map_delta_ = std::move(map_delta);
  model->beta_mean_ = std::move(beta_mean);
  model->beta_cov_ = std::move(beta_cov);
  model->sigma_hat_sq_ = sigma_hat_sq;
  model->lambda_ = lambda;
  model->training_count_ = training_count;
  return model;
}

}  // namespace phykrig
