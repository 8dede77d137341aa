#include "phykrig/pendulum_env.hpp"

#include <algorithm>
#include <cmath>

#include "phykrig/errors.hpp"

namespace phykrig {

double pendulum_cost(const Eigen::VectorXd& state, double pole_length) {
  const double x = state(0);
  const double theta = state(1);
  const double ex = x + pole_length * std::sin(theta);
  const double ey = pole_length * std::cos(theta);
  const double dx = ex - 0.0;
  const double dy = ey - pole_length;
  const double d2 = dx * dx + dy * dy;
  return 1.0 - std::exp(-2.0 * d2);
}

PendulumEnv::PendulumEnv(PendulumParams params, OdeStepConfig step, EpisodeSpec spec)
    : params_(params), step_(step), spec_(std::move(spec)) {
  params_.validate();
  if (spec_.horizon < 1 || spec_.action_limit <= 0.0 || spec_.initial_mean.size() != 4 ||
      spec_.initial_stddev < 0.0) {
    throw ConfigError("EpisodeSpec: invalid episode protocol");
  }
}

Eigen::VectorXd PendulumEnv::sample_initial_state(Rng& rng) const {
  Eigen::VectorXd s = spec_.initial_mean;
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) += spec_.initial_stddev * rng.normal();
  return s;
}

Eigen::VectorXd PendulumEnv::step(const Eigen::VectorXd& state,
                                  const Eigen::VectorXd& action) const {
  if (action.size() != 1) throw ConfigError("PendulumEnv: expects a scalar action");
  const double a = std::clamp(action(0), -spec_.action_limit, spec_.action_limit);
  auto rhs = [this](const Eigen::VectorXd& s, double u) -> Eigen::VectorXd {
    return pendulum_ode(s, u, params_);
  };
  return integrate_step(rhs, state, a, step_);
}

double PendulumEnv::cost(const Eigen::VectorXd& state) const {
  return pendulum_cost(state, params_.length);
}

EpisodeResult run_real_episode(const PendulumEnv& env, const Policy& policy, Rng& rng) {
  EpisodeResult result;
  Eigen::VectorXd state = env.sample_initial_state(rng);
  double total = 0.0;
  const int horizon = env.spec().horizon;
  result.transitions.reserve(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) {
    Eigen::VectorXd action = policy(state);
    if (action.size() != 1 || !action.allFinite()) {
      throw FitError("run_real_episode: policy produced an invalid action");
    }
    action(0) = std::clamp(action(0), -env.spec().action_limit, env.spec().action_limit);
    Eigen::VectorXd next = env.step(state, action);
    const double c = env.cost(next);
    Transition tr;
    tr.state = state;
    tr.action = action;
    tr.cost = c;
    tr.next_state = next;
    tr.model_generated = false;
    result.transitions.push_back(std::move(tr));
    total += c;
    state = next;
  }
  result.normalized_cost = total / horizon;
  return result;
}

}  // namespace phykrig
