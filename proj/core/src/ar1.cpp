#include "phykrig/ar1.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "phykrig/errors.hpp"
#include "phykrig/rng.hpp"

namespace phykrig {

namespace {

// Low-fidelity design: evenly spaced for one input dimension, seeded uniform
// draws otherwise.
Eigen::MatrixXd low_fidelity_design(const Eigen::VectorXd& low, const Eigen::VectorXd& high,
                                    int count, std::uint64_t seed) {
  const int d = static_cast<int>(low.size());
  Eigen::MatrixXd X(count, d);
  if (d == 1) {
    if (count == 1) {
      X(0, 0) = 0.5 * (low(0) + high(0));
    } else {
      for (int i = 0; i < count; ++i) {
        X(i, 0) = low(0) + (high(0) - low(0)) * static_cast<double>(i) /
                               static_cast<double>(count - 1);
      }
    }
    return X;
  }
  Rng rng(mix_seed(seed, 0xa21));
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < d; ++j) X(i, j) = rng.uniform(low(j), high(j));
  }
  return X;
}

}  // namespace

std::unique_ptr<Ar1Surrogate> Ar1Surrogate::fit(const Dataset& data,
                                                std::shared_ptr<const PhysicsModel> physics,
                                                const FitConfig& config) {
  data.validate();
  if (data.output_dim() != 1) throw FitError("Ar1Surrogate: single-output models only");
  if (!physics) throw FitError("Ar1Surrogate: requires a physics model");
  if (data.rows() == 0) throw FitError("Ar1Surrogate: needs at least one observation");
  if (config.ar1_low_fidelity_count < 1) {
    throw ConfigError("Ar1Surrogate: low-fidelity design size must be >= 1");
  }
  if (config.ar1_box_low.size() != data.input_dim() ||
      config.ar1_box_high.size() != data.input_dim()) {
    throw ConfigError("Ar1Surrogate: low-fidelity input box does not match the input dimension");
  }

  auto model = std::unique_ptr<Ar1Surrogate>(new Ar1Surrogate());

  // Stage 1: zero-mean GP on physics evaluations.
  const Eigen::MatrixXd X1 = low_fidelity_design(config.ar1_box_low, config.ar1_box_high,
                                                 config.ar1_low_fidelity_count, config.seed);
  const Eigen::MatrixXd y1 = physics->evaluate_batch(X1);
  FitConfig low_cfg;
  low_cfg.optimizer = config.optimizer;
  low_cfg.optimize = config.optimize;
  low_cfg.seed = mix_seed(config.seed, 0xa22);
  model->low_fi_ = AdjustmentGp::fit(ModelKind::ZeroMeanGp, Dataset(X1, y1), nullptr, low_cfg);

  // Stage 2: joint (delta kernel, noise, rho) on the residuals.
  model->y_train_ = data.y.col(0);
  model->mu1_train_ = model->low_fi_->predict(data.X).mean.col(0);
  model->input_transform_ = config.standardize_inputs
                                ? ColumnTransform::standardize(data.X)
                                : ColumnTransform::identity(data.input_dim());
  model->X_std_ = model->input_transform_.apply(data.X);

  const Eigen::VectorXd resid_unit = model->y_train_ - model->mu1_train_;  // rho = 1 residuals
  model->residual_scale_ = ColumnTransform::scale_only(resid_unit).scale(0);

  AdjustmentCovariance cov;
  cov.input_dim = data.input_dim();
  cov.use_rho = false;
  cov.use_delta = true;
  const int kernel_params = cov.param_count();

  Eigen::VectorXd theta0(kernel_params + 1);
  theta0.head(kernel_params) = cov.default_params();
  theta0(kernel_params) = 1.0;  // rho, linear space
  if (config.initial_params.size() > 0) {
    if (config.initial_params.size() != theta0.size()) {
      throw FitError("Ar1Surrogate: initial parameter vector has wrong length");
    }
    theta0 = config.initial_params;
  }

  const double scale = model->residual_scale_;
  const Eigen::VectorXd& y = model->y_train_;
  const Eigen::VectorXd& mu1 = model->mu1_train_;
  const Eigen::MatrixXd& Xs = model->X_std_;

  if (config.optimize) {
    const Objective objective = [&](const Eigen::VectorXd& params,
                                    Eigen::VectorXd& grad) -> double {
      try {
        const double rho = params(kernel_params);
        const Eigen::VectorXd kern = params.head(kernel_params);
        const Eigen::VectorXd r = (y - rho * mu1) / scale;

        Eigen::MatrixXd K;
        std::vector<Eigen::MatrixXd> dK;
        cov.build_with_grads(Xs, kern, K, dK);
        const CholeskyFactor factor = cholesky_factor(K);
        const double value = nlml_from_factor(r, factor);
        const Eigen::VectorXd kern_grad = nlml_gradient_from_parts(r, factor, dK);

        grad.resize(params.size());
        grad.head(kernel_params) = kern_grad;
        // d/d rho of 1/2 r^T K^{-1} r with r = (y - rho mu1)/scale.
        const Eigen::VectorXd alpha = factor.solve(r);
        grad(kernel_params) = -alpha.dot(mu1) / scale;
        return value;
      } catch (const NumericalError&) {
        grad.setConstant(params.size(), std::numeric_limits<double>::quiet_NaN());
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
    OptimizerConfig opt = config.optimizer;
    opt.seed = mix_seed(config.seed, 0xa23);
    theta0 = optimize_hyperparams(objective, theta0, opt).params;
  }

  model->rho_ = theta0(kernel_params);
  model->theta_ = theta0.head(kernel_params);
  model->finalize();
  return model;
}

void Ar1Surrogate::finalize() {
  AdjustmentCovariance cov;
  cov.input_dim = static_cast<int>(X_std_.cols());
  cov.use_rho = false;
  cov.use_delta = true;
  const Eigen::MatrixXd K = cov.build(X_std_, theta_);
  chol_ = cholesky_factor(K);
  const Eigen::VectorXd r = (y_train_ - rho_ * mu1_train_) / residual_scale_;
  alpha_ = chol_.solve(r);
  fit_nlml_ = nlml_from_factor(r, chol_);
}

PredictiveDistribution Ar1Surrogate::predict(const Eigen::MatrixXd& Xq) const {
  if (Xq.cols() != input_dim()) {
    throw std::invalid_argument("Ar1Surrogate::predict: input dimension mismatch");
  }
  AdjustmentCovariance cov;
  cov.input_dim = static_cast<int>(X_std_.cols());
  cov.use_rho = false;
  cov.use_delta = true;
  const KernelParams delta = cov.delta_params(theta_);
  const double noise_var = cov.noise_param(theta_).noise_variance();

  const PredictiveDistribution stage1 = low_fi_->predict(Xq);
  const Eigen::MatrixXd Xq_std = input_transform_.apply(Xq);
  const Eigen::MatrixXd q = rbf_kernel(X_std_, Xq_std, delta);

  const Eigen::VectorXd mean_std = q.transpose() * alpha_;
  const Eigen::MatrixXd V = chol_.forward_solve(q);
  const Eigen::VectorXd explained = V.colwise().squaredNorm().transpose();
  const Eigen::VectorXd var_delta =
      ((Eigen::VectorXd::Constant(Xq.rows(), delta.signal_variance()) - explained).cwiseMax(0.0)
           .array() +
       noise_var)
          .matrix() *
      (residual_scale_ * residual_scale_);

  PredictiveDistribution out;
  out.mean = rho_ * stage1.mean + residual_scale_ * mean_std;
  out.variance = rho_ * rho_ * stage1.variance + var_delta;
  return out;
}

std::unique_ptr<Ar1Surrogate> Ar1Surrogate::from_parts(
    std::unique_ptr<AdjustmentGp> low_fi, double rho, ColumnTransform input_transform,
    double residual_scale, Eigen::MatrixXd X_std, Eigen::VectorXd mu1_train,
    Eigen::VectorXd y_train, Eigen::VectorXd theta) {
  auto model = std::unique_ptr<Ar1Surrogate>(new Ar1Surrogate());
  model->low_fi_ = std::move(low_fi);
  model->rho_ = rho;
  model->input_transform_ = std::move(input_transform);
  model->residual_scale_ = residual_scale;
  model->X_std_ = std::move(X_std);
  model->mu1_train_ = std::move(mu1_train);
  model->y_train_ = std::move(y_train);
  model->theta_ = std::move(theta);
  model->finalize();
  return model;
}

}  // namespace phykrig
