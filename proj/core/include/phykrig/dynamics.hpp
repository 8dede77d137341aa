#pragma once

#include <memory>
#include <vector>

#include "phykrig/pendulum.hpp"
#include "phykrig/surrogate.hpp"

namespace phykrig {

// One-step transition model over [state, action] inputs. Predictions are
// per-dimension Gaussian marginals of the next state, with means clamped to
// the trusted state box.
class DynamicsModel {
public:
  virtual ~DynamicsModel() = default;
  virtual int state_dim() const = 0;
  virtual int action_dim() const = 0;
  // mean/variance are state_dim vectors.
  virtual PredictiveDistribution predict_next(const Eigen::VectorXd& state,
                                              const Eigen::VectorXd& action) const = 0;
  virtual const DomainBox& state_box() const = 0;
};

// The physics model used directly as a zero-variance transition model.
class PhysicsDynamics final : public DynamicsModel {
public:
  PhysicsDynamics(std::shared_ptr<const PhysicsModel> physics, DomainBox state_box);
  int state_dim() const override { return physics_->output_dim(); }
  int action_dim() const override { return physics_->input_dim() - physics_->output_dim(); }
  PredictiveDistribution predict_next(const Eigen::VectorXd& state,
                                      const Eigen::VectorXd& action) const override;
  const DomainBox& state_box() const override { return box_; }

private:
  std::shared_ptr<const PhysicsModel> physics_;
  DomainBox box_;
};

// Exposes one output component of a multi-output physics model as the scalar
// prior of a per-dimension surrogate.
class PhysicsComponent final : public PhysicsModel {
public:
  PhysicsComponent(std::shared_ptr<const PhysicsModel> base, int component);
  int input_dim() const override { return base_->input_dim(); }
  int output_dim() const override { return 1; }
  Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const override;
  std::map<std::string, std::string> describe() const override;

private:
  std::shared_ptr<const PhysicsModel> base_;
  int component_;
};

// Independent single-output surrogates, one per state dimension, each using
// the matching component of the physics prediction as its prior.
class SurrogateDynamics final : public DynamicsModel {
public:
  SurrogateDynamics(std::vector<std::unique_ptr<SurrogateModel>> per_dim,
                    std::shared_ptr<const PhysicsModel> physics, DomainBox state_box);

  int state_dim() const override { return static_cast<int>(per_dim_.size()); }
  int action_dim() const override { return physics_->input_dim() - state_dim(); }
  PredictiveDistribution predict_next(const Eigen::VectorXd& state,
                                      const Eigen::VectorXd& action) const override;
  const DomainBox& state_box() const override { return box_; }

  const SurrogateModel& dimension_model(int j) const { return *per_dim_.at(j); }
  void save(std::ostream& out) const;

private:
  std::vector<std::unique_ptr<SurrogateModel>> per_dim_;
  std::shared_ptr<const PhysicsModel> physics_;
  DomainBox box_;
};

struct Transition;  // control module

// Fit one surrogate per next-state dimension on [state, action] -> next_state
// data. Per-dimension fits derive their seeds from config.seed and the
// dimension index; `warm_starts`, when sized state_dim, seeds each
// dimension's hyperparameter search (typically the previous refit's optimum).
// AR1 is not supported as a dynamics backend.
std::unique_ptr<SurrogateDynamics> fit_dynamics(
    const std::vector<Transition>& transitions, std::shared_ptr<const PhysicsModel> physics,
    ModelKind kind, const FitConfig& config, const DomainBox& state_box,
    const std::vector<Eigen::VectorXd>& warm_starts = {});

std::unique_ptr<SurrogateDynamics> load_dynamics(std::istream& in);

}  // namespace phykrig
