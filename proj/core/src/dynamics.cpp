#include "phykrig/dynamics.hpp"

#include <utility>

#include "phykrig/ar1.hpp"
#include "phykrig/errors.hpp"
#include "phykrig/gp_surrogate.hpp"
#include "phykrig/rng.hpp"
#include "phykrig/rra.hpp"
#include "phykrig/transition.hpp"

namespace phykrig {

PhysicsDynamics::PhysicsDynamics(std::shared_ptr<const PhysicsModel> physics, DomainBox state_box)
    : physics_(std::move(physics)), box_(std::move(state_box)) {
  if (!physics_) throw ConfigError("PhysicsDynamics requires a physics model");
  if (physics_->output_dim() != box_.dim())
    throw ConfigError("state box dimension does not match physics output");
  if (physics_->input_dim() <= physics_->output_dim())
    throw ConfigError("physics input must include at least one action dimension");
}

PredictiveDistribution PhysicsDynamics::predict_next(const Eigen::VectorXd& state,
                                                     const Eigen::VectorXd& action) const {
  Eigen::VectorXd input(state.size() + action.size());
  input << state, action;
  PredictiveDistribution out;
  Eigen::VectorXd mean = physics_->evaluate(input);
  out.mean = box_.clip(mean).transpose();
  out.variance = Eigen::MatrixXd::Zero(1, mean.size());
  return out;
}

PhysicsComponent::PhysicsComponent(std::shared_ptr<const PhysicsModel> base, int component)
    : base_(std::move(base)), component_(component) {
  if (!base_) throw ConfigError("PhysicsComponent requires a base model");
  if (component_ < 0 || component_ >= base_->output_dim())
    throw ConfigError("PhysicsComponent index out of range");
}

Eigen::VectorXd PhysicsComponent::evaluate(const Eigen::VectorXd& x) const {
  Eigen::VectorXd full = base_->evaluate(x);
  Eigen::VectorXd out(1);
  out(0) = full(component_);
  return out;
}

std::map<std::string, std::string> PhysicsComponent::describe() const {
  auto desc = base_->describe();
  desc["component"] = std::to_string(component_);
  return desc;
}

SurrogateDynamics::SurrogateDynamics(std::vector<std::unique_ptr<SurrogateModel>> per_dim,
                                     std::shared_ptr<const PhysicsModel> physics,
                                     DomainBox state_box)
    : per_dim_(std::move(per_dim)), physics_(std::move(physics)), box_(std::move(state_box)) {
  if (per_dim_.empty()) throw ConfigError("SurrogateDynamics needs at least one dimension");
  if (!physics_) throw ConfigError("SurrogateDynamics requires the shared physics model");
  if (static_cast<int>(per_dim_.size()) != box_.dim())
    throw ConfigError("state box dimension does not match per-dimension model count");
  for (const auto& m : per_dim_) {
    if (!m || m->output_dim() != 1 || m->input_dim() != physics_->input_dim())
      throw ConfigError("per-dimension models must be scalar over [state, action]");
  }
}

PredictiveDistribution SurrogateDynamics::predict_next(const Eigen::VectorXd& state,
                                                       const Eigen::VectorXd& action) const {
  Eigen::VectorXd input(state.size() + action.size());
  input << state, action;
  Eigen::MatrixXd x = input.transpose();
  const int d = state_dim();
  PredictiveDistribution out;
  out.mean.resize(1, d);
  out.variance.resize(1, d);
  for (int j = 0; j < d; ++j) {
    PredictiveDistribution pj = per_dim_[j]->predict(x);
    out.mean(0, j) = pj.mean(0, 0);
    out.variance(0, j) = pj.variance(0, 0);
  }
  Eigen::VectorXd clipped = box_.clip(out.mean.row(0).transpose());
  out.mean.row(0) = clipped.transpose();
  return out;
}

std::unique_ptr<SurrogateDynamics> fit_dynamics(
    const std::vector<Transition>& transitions, std::shared_ptr<const PhysicsModel> physics,
    ModelKind kind, const FitConfig& config, const DomainBox& state_box,
    const std::vector<Eigen::VectorXd>& warm_starts) {
  if (!physics) throw ConfigError("fit_dynamics requires a physics model");
  if (kind == ModelKind::Ar1)
    throw ConfigError("recursive co-kriging is not supported as a dynamics backend");
  const int sd = physics->output_dim();
  const int in_dim = physics->input_dim();
  const int ad = in_dim - sd;
  if (ad < 1) throw ConfigError("physics input must include action dimensions");

  const auto n = static_cast<Eigen::Index>(transitions.size());
  Eigen::MatrixXd X(n, in_dim);
  Eigen::MatrixXd Y(n, sd);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Transition& t = transitions[static_cast<std::size_t>(i)];
    if (t.state.size() != sd || t.action.size() != ad || t.next_state.size() != sd)
      throw ConfigError("transition dimensions do not match the physics model");
    X.row(i).head(sd) = t.state.transpose();
    X.row(i).tail(ad) = t.action.transpose();
    Y.row(i) = t.next_state.transpose();
  }

  std::vector<std::unique_ptr<SurrogateModel>> per_dim;
  per_dim.reserve(static_cast<std::size_t>(sd));
  for (int j = 0; j < sd; ++j) {
    Dataset dj;
    dj.X = X;
    dj.y = Y.col(j);
    FitConfig cj = config;
    cj.seed = mix_seed(config.seed, 0xd1a, static_cast<std::uint64_t>(j));
    if (static_cast<int>(warm_starts.size()) == sd && warm_starts[static_cast<std::size_t>(j)].size() > 0) {
      cj.warm_start = warm_starts[static_cast<std::size_t>(j)];
    }
    std::shared_ptr<const PhysicsModel> prior;
    if (kind != ModelKind::ZeroMeanGp) prior = std::make_shared<PhysicsComponent>(physics, j);
    per_dim.push_back(fit_surrogate(kind, dj, prior, cj));
  }
  return std::make_unique<SurrogateDynamics>(std::move(per_dim), physics, state_box);
}

std::unique_ptr<SurrogateModel> fit_surrogate(ModelKind kind, const Dataset& data,
                                              std::shared_ptr<const PhysicsModel> physics,
                                              const FitConfig& config) {
  switch (kind) {
    case ModelKind::Ar1:
      return Ar1Surrogate::fit(data, std::move(physics), config);
    case ModelKind::Rra:
      return RraSurrogate::fit(data, std::move(physics), config);
    default:
      return AdjustmentGp::fit(kind, data, std::move(physics), config);
  }
}

}  // namespace phykrig
