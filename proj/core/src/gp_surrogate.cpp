#include "phykrig/gp_surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "phykrig/errors.hpp"
#include "phykrig/rng.hpp"

namespace phykrig {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::ZeroMeanGp: return "zero-mean-gp";
    case ModelKind::PhyMeanGp: return "phy-mean-gp";
    case ModelKind::GpBias: return "gp-bias";
    case ModelKind::GpScale: return "gp-scale";
    case ModelKind::Ar1: return "ar1";
    case ModelKind::Cka: return "cka";
    case ModelKind::Rra: return "rra";
  }
  throw std::invalid_argument("to_string: unknown ModelKind");
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "zero-mean-gp") return ModelKind::ZeroMeanGp;
  if (name == "phy-mean-gp") return ModelKind::PhyMeanGp;
  if (name == "gp-bias") return ModelKind::GpBias;
  if (name == "gp-scale") return ModelKind::GpScale;
  if (name == "ar1") return ModelKind::Ar1;
  if (name == "cka") return ModelKind::Cka;
  if (name == "rra") return ModelKind::Rra;
  throw std::invalid_argument("model_kind_from_string: unknown model '" + name + "'");
}

bool AdjustmentGp::use_rho() const {
  return kind_ == ModelKind::GpScale || kind_ == ModelKind::Cka;
}

bool AdjustmentGp::use_delta() const {
  return kind_ != ModelKind::GpScale;
}

AdjustmentCovariance AdjustmentGp::covariance() const {
  AdjustmentCovariance cov;
  cov.input_dim = input_dim();
  cov.use_rho = use_rho();
  cov.use_delta = use_delta();
  if (cov.use_rho) cov.fp = fp_train_;
  return cov;
}

namespace {

// Deterministic subsample (without replacement) for hyperparameter search on
// large datasets; the posterior still conditions on everything.
std::vector<Eigen::Index> subsample_rows(Eigen::Index n, int cap, std::uint64_t seed) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  if (cap <= 0 || n <= cap) return idx;
  Rng rng(mix_seed(seed, 0x5ab));
  for (Eigen::Index i = 0; i < cap; ++i) {
    const Eigen::Index j = i + rng.uniform_int(static_cast<int>(n - i));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(cap));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

std::unique_ptr<AdjustmentGp> AdjustmentGp::fit(ModelKind kind, const Dataset& data,
                                                std::shared_ptr<const PhysicsModel> physics,
                                                const FitConfig& config) {
  data.validate();
  if (data.output_dim() != 1) {
    throw FitError("AdjustmentGp: single-output models only; fit each output separately");
  }
  const bool needs_physics = kind != ModelKind::ZeroMeanGp;
  if (needs_physics && !physics) {
    throw FitError("AdjustmentGp: model kind '" + to_string(kind) + "' requires a physics model");
  }
  if (physics && physics->input_dim() != data.input_dim()) {
    throw FitError("AdjustmentGp: physics model input dimension does not match data");
  }
  const bool prior_only_ok = kind == ModelKind::Cka;
  if (data.rows() == 0 && !prior_only_ok) {
    throw FitError("AdjustmentGp: model kind '" + to_string(kind) + "' needs at least one row");
  }

  auto model = std::unique_ptr<AdjustmentGp>(new AdjustmentGp());
  model->kind_ = kind;
  model->physics_ = std::move(physics);

  const Eigen::Index n = data.rows();
  if (model->has_physics_mean()) {
    model->fp_train_ = n > 0 ? Eigen::VectorXd(model->physics_->evaluate_batch(data.X).col(0))
                             : Eigen::VectorXd(0);
  } else {
    model->fp_train_ = Eigen::VectorXd::Zero(n);
  }
  Eigen::VectorXd residual = data.y.col(0) - model->fp_train_;

  model->input_transform_ = config.standardize_inputs ? ColumnTransform::standardize(data.X)
                                                      : ColumnTransform::identity(data.input_dim());
  model->X_std_ = model->input_transform_.apply(data.X);
  const ColumnTransform resid_t = ColumnTransform::scale_only(residual);
  model->residual_scale_ = n > 0 ? resid_t.scale(0) : 1.0;
  model->resid_std_ = residual / model->residual_scale_;

  const AdjustmentCovariance cov_all = model->covariance();
  Eigen::VectorXd theta = config.initial_params.size() > 0 ? config.initial_params
                                                           : cov_all.default_params();
  if (config.warm_start.size() > 0) theta = config.warm_start;
  if (theta.size() != cov_all.param_count()) {
    throw FitError("AdjustmentGp: initial parameter vector has wrong length");
  }

  if (config.optimize && n > 0) {
    const auto rows = subsample_rows(n, config.max_optimization_points, config.seed);
    Eigen::MatrixXd X_opt(static_cast<Eigen::Index>(rows.size()), data.input_dim());
    Eigen::VectorXd r_opt(static_cast<Eigen::Index>(rows.size()));
    Eigen::VectorXd fp_opt(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      X_opt.row(static_cast<Eigen::Index>(i)) = model->X_std_.row(rows[i]);
      r_opt(static_cast<Eigen::Index>(i)) = model->resid_std_(rows[i]);
      fp_opt(static_cast<Eigen::Index>(i)) = model->fp_train_(rows[i]);
    }
    AdjustmentCovariance cov_opt = cov_all;
    if (cov_opt.use_rho) cov_opt.fp = fp_opt;

    OptimizerConfig opt = config.optimizer;
    opt.seed = mix_seed(config.seed, 0xad1);
    // The marginal likelihood of these covariances routinely has two basins:
    // one explaining the residuals as broadband noise, one explaining them as
    // smooth structure. Gradient steps rarely cross between them, so alongside
    // the caller's starting point we always try a deterministic "smooth,
    // near-interpolation" start: long lengthscales, signal variance well above
    // the (unit) residual variance so the descent cannot cheaply reassign
    // signal to noise, and noise far below it. Inputs are standardized and
    // residuals scale-normalized, so these constants are dimensionless and
    // model-agnostic.
    Eigen::VectorXd smooth_start = cov_opt.default_params();
    Eigen::Index offset = 0;
    if (cov_opt.use_rho) {
      smooth_start.segment(offset, data.input_dim()).setConstant(2.0);
      smooth_start(offset + data.input_dim()) = 4.0;
      offset += data.input_dim() + 1;
    }
    if (cov_opt.use_delta) {
      smooth_start.segment(offset, data.input_dim()).setConstant(2.0);
      smooth_start(offset + data.input_dim()) = 4.0;
      offset += data.input_dim() + 1;
    }
    smooth_start(offset) = -6.0;
    opt.preset_starts.push_back(std::move(smooth_start));
    const Objective objective = [&](const Eigen::VectorXd& params,
                                    Eigen::VectorXd& grad) -> double {
      try {
        auto [value, g] = nlml_with_gradient(cov_opt, X_opt, r_opt, params);
        grad = std::move(g);
        return value;
      } catch (const NumericalError&) {
        grad.setConstant(params.size(), std::numeric_limits<double>::quiet_NaN());
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
    theta = optimize_hyperparams(objective, theta, opt).params;
  }

  model->theta_ = theta;
  model->finalize();
  return model;
}

void AdjustmentGp::finalize() {
  const Eigen::Index n = X_std_.rows();
  if (n == 0) {
    chol_ = CholeskyFactor();
    alpha_ = Eigen::VectorXd(0);
    fit_nlml_ = 0.0;
    return;
  }
  const Eigen::MatrixXd K = covariance().build(X_std_, theta_);
  chol_ = cholesky_factor(K);
  alpha_ = chol_.solve(resid_std_);
  fit_nlml_ = nlml_from_factor(resid_std_, chol_);
}

std::unique_ptr<AdjustmentGp> AdjustmentGp::from_parts(
    ModelKind kind, std::shared_ptr<const PhysicsModel> physics, ColumnTransform input_transform,
    double residual_scale, Eigen::MatrixXd X_std, Eigen::VectorXd resid_std,
    Eigen::VectorXd fp_train, Eigen::VectorXd theta) {
  auto model = std::unique_ptr<AdjustmentGp>(new AdjustmentGp());
  model->kind_ = kind;
  model->physics_ = std::move(physics);
  model->input_transform_ = std::move(input_transform);
  model->residual_scale_ = residual_scale;
  model->X_std_ = std::move(X_std);
  model->resid_std_ = std::move(resid_std);
  model->fp_train_ = std::move(fp_train);
  model->theta_ = std::move(theta);
  model->finalize();
  return model;
}

PredictiveDistribution AdjustmentGp::predict(const Eigen::MatrixXd& Xq) const {
  if (Xq.cols() != input_dim()) {
    throw std::invalid_argument("AdjustmentGp::predict: input dimension mismatch");
  }
  const Eigen::Index nq = Xq.rows();
  const AdjustmentCovariance cov = covariance();
  const NoiseParam noise = cov.noise_param(theta_);

  Eigen::VectorXd fp_q = Eigen::VectorXd::Zero(nq);
  if (has_physics_mean()) fp_q = physics_->evaluate_batch(Xq).col(0);
  const Eigen::VectorXd prior_mean = has_physics_mean() ? fp_q : Eigen::VectorXd::Zero(nq);

  const Eigen::MatrixXd Xq_std = input_transform_.apply(Xq);

  // Prior (co)variance of the latent adjustment at the queries.
  Eigen::VectorXd kss = Eigen::VectorXd::Zero(nq);
  if (use_rho()) {
    kss += cov.rho_params(theta_).signal_variance() * fp_q.array().square().matrix();
  }
  if (use_delta()) {
    kss.array() += cov.delta_params(theta_).signal_variance();
  }

  PredictiveDistribution out;
  const Eigen::Index n = X_std_.rows();
  if (n == 0) {
    out.mean = prior_mean;
    out.variance = (kss.array() + noise.noise_variance()).matrix() *
                   (residual_scale_ * residual_scale_);
    return out;
  }

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, nq);
  if (use_rho()) {
    q += fp_train_.asDiagonal() * rbf_kernel(X_std_, Xq_std, cov.rho_params(theta_)) *
         fp_q.asDiagonal();
  }
  if (use_delta()) {
    q += rbf_kernel(X_std_, Xq_std, cov.delta_params(theta_));
  }

  const Eigen::VectorXd mean_std = q.transpose() * alpha_;
  const Eigen::MatrixXd V = chol_.forward_solve(q);
  const Eigen::VectorXd explained = V.colwise().squaredNorm().transpose();
  Eigen::VectorXd var_std =
      (kss - explained).cwiseMax(0.0).array() + noise.noise_variance();

  out.mean = prior_mean + residual_scale_ * mean_std;
  out.variance = var_std * (residual_scale_ * residual_scale_);
  return out;
}

double AdjustmentGp::noise_variance() const {
  return covariance().noise_param(theta_).noise_variance() * residual_scale_ * residual_scale_;
}

double AdjustmentGp::prior_variance_at(const Eigen::VectorXd& x) const {
  const AdjustmentCovariance cov = covariance();
  double v = 0.0;
  if (use_rho()) {
    const double fp = physics_->evaluate(x)(0);
    v += cov.rho_params(theta_).signal_variance() * fp * fp;
  }
  if (use_delta()) {
    v += cov.delta_params(theta_).signal_variance();
  }
  return v * residual_scale_ * residual_scale_;
}

Eigen::VectorXd AdjustmentGp::kernel_lengthscales_original(bool rho_channel) const {
  const AdjustmentCovariance cov = covariance();
  const KernelParams p = rho_channel ? cov.rho_params(theta_) : cov.delta_params(theta_);
  return p.lengthscales().cwiseProduct(input_transform_.scale);
}

}  // namespace phykrig
