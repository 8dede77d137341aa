#pragma once

#include <cmath>
#include <cstdint>

#include "phykrig/mlp.hpp"
#include "phykrig/replay.hpp"
#include "phykrig/rng.hpp"

namespace phykrig {

struct SacConfig {
  int state_dim = 4;
  int action_dim = 1;
  double action_limit = 10.0;
  int hidden = 64;                // two hidden layers of this width
  double lr = 3e-4;
  int batch_size = 128;
  double gamma = 0.99;
  double tau = 0.005;             // Polyak coefficient toward the online nets
  double init_alpha = 0.2;        // entropy temperature start value
  double target_entropy = -1.0;   // -action_dim
  double log_sigma_min = -5.0;    // soft bounds on the policy log-stddev
  double log_sigma_max = 2.0;
  std::uint64_t seed = 0;
};

// Per-sample quantities of the tanh-squashed Gaussian policy head, together
// with the analytic derivatives used by the actor update. Computed from the
// raw policy outputs (mu, log_sigma) and a fixed standard-normal draw z, so
// every formula is finite-difference checkable.
struct SquashedSample {
  double action = 0.0;       // a = limit * tanh(mu + sigma z)
  double log_prob = 0.0;     // log pi(a | s)
  double dlogp_dmu = 0.0;
  double dlogp_dlog_sigma = 0.0;
  double da_dmu = 0.0;
  double da_dlog_sigma = 0.0;
};
SquashedSample squashed_gaussian(double mu, double log_sigma, double z, double limit);

// Maps an unbounded network output to log_sigma in (lo, hi) smoothly;
// derivative returned for backpropagation.
double soft_clamp(double raw, double lo, double hi);
double soft_clamp_derivative(double raw, double lo, double hi);

// Losses of one gradient step, for logging and tests.
struct SacStepStats {
  double critic1_loss = 0.0;
  double critic2_loss = 0.0;
  double actor_loss = 0.0;
  double alpha = 0.0;
  double mean_log_prob = 0.0;
};

// Compact soft actor-critic: tanh-squashed Gaussian policy, double Q
// networks with Polyak-averaged targets, automatic entropy temperature.
// Rewards are -cost. All randomness flows through the agent's own stream.
class SacAgent {
public:
  explicit SacAgent(const SacConfig& config);

  // Stochastic action (training) and mean action (evaluation), both within
  // [-limit, limit].
  Eigen::VectorXd act(const Eigen::VectorXd& state);
  Eigen::VectorXd act_mean(const Eigen::VectorXd& state) const;

  // `steps` gradient steps, each on a fresh 1:10 real/model batch. Returns
  // the stats of the last step. Throws if the real buffer is empty.
  SacStepStats update(const ReplayBuffers& buffers, int steps);

  // One gradient step on an explicit batch (deterministic given the agent
  // state; used by tests).
  SacStepStats update_on_batch(const std::vector<Transition>& batch);

  double alpha() const { return std::exp(log_alpha_); }
  const SacConfig& config() const { return config_; }

  // Direct access for diagnostics and finite-difference tests.
  Mlp& policy() { return policy_; }
  Mlp& critic1() { return q1_; }
  Mlp& critic2() { return q2_; }
  double critic_loss_on(const std::vector<Transition>& batch);  // evaluation only

private:
  struct PolicyEval {
    Eigen::MatrixXd actions;    // n x action_dim
    Eigen::VectorXd log_prob;   // n
    Eigen::MatrixXd dlogp_dmu, dlogp_dls, da_dmu, da_dls;  // n x action_dim
    Eigen::MatrixXd raw;        // n x 2*action_dim, network output
    Mlp::Cache cache;
  };
  PolicyEval eval_policy(const Eigen::MatrixXd& states, bool with_noise);
  Eigen::VectorXd critic_targets(const std::vector<Transition>& batch);

  SacConfig config_;
  Mlp policy_, q1_, q2_, q1_target_, q2_target_;
  double log_alpha_;
  double alpha_m_ = 0.0, alpha_v_ = 0.0;  // Adam state for log_alpha
  long long alpha_t_ = 0;
  Rng rng_;
};

}  // namespace phykrig
