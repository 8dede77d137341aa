#pragma once

#include <functional>
#include <vector>

#include "phykrig/pendulum.hpp"
#include "phykrig/rng.hpp"
#include "phykrig/transition.hpp"

namespace phykrig {

// Episode protocol shared by real and model rollouts: 25 steps of 0.1 s,
// initial state N([0, pi, 0, 0], 0.2^2 I), scalar force in [-10, 10].
inline constexpr double kPi = 3.14159265358979323846;

struct EpisodeSpec {
  int horizon = 25;
  double action_limit = 10.0;
  Eigen::VectorXd initial_mean = (Eigen::VectorXd(4) << 0.0, kPi, 0.0, 0.0).finished();
  double initial_stddev = 0.2;
};

// Distance cost 1 - exp(-2 d^2) where d is the gap between the pole endpoint
// (x + l sin(theta), l cos(theta)) and the goal (0, l). theta = 0 is the goal
// orientation; the hanging start theta = pi costs about 0.9439.
double pendulum_cost(const Eigen::VectorXd& state, double pole_length);

// Maps a state to a bounded action (the action is clipped to the limit
// before being applied).
using Policy = std::function<Eigen::VectorXd(const Eigen::VectorXd& state)>;

// The true system: integrates the pendulum ODE with RK4. No state clipping;
// non-finite states surface as integration errors.
class PendulumEnv {
public:
  PendulumEnv(PendulumParams params, OdeStepConfig step, EpisodeSpec spec);

  Eigen::VectorXd sample_initial_state(Rng& rng) const;
  Eigen::VectorXd step(const Eigen::VectorXd& state, const Eigen::VectorXd& action) const;
  double cost(const Eigen::VectorXd& state) const;

  const EpisodeSpec& spec() const { return spec_; }
  const PendulumParams& params() const { return params_; }
  const OdeStepConfig& step_config() const { return step_; }

private:
  PendulumParams params_;
  OdeStepConfig step_;
  EpisodeSpec spec_;
};

struct EpisodeResult {
  std::vector<Transition> transitions;
  double normalized_cost = 0.0;  // mean per-step cost over the horizon
};

// One full real episode: sample s0, roll the policy through the true
// dynamics, record per-step cost at the reached state. Integration failures
// propagate as errors (the real system is never truncated silently).
EpisodeResult run_real_episode(const PendulumEnv& env, const Policy& policy, Rng& rng);

}  // namespace phykrig
