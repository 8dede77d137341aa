#include "phykrig/sac.hpp"

#include <algorithm>
#include <cmath>

#include "phykrig/errors.hpp"

namespace phykrig {

namespace {

double softplus(double x) {
  // max(x, 0) + log1p(exp(-|x|)) is stable for large |x|.
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

// log(1 - tanh(u)^2) without catastrophic cancellation.
double log_one_minus_tanh_sq(double u) {
  return 2.0 * (std::log(2.0) - u - softplus(-2.0 * u));
}

constexpr double kLog2Pi = 1.8378770664093454836;

std::vector<int> net_sizes(int in, int hidden, int out) { return {in, hidden, hidden, out}; }

}  // namespace

double soft_clamp(double raw, double lo, double hi) {
  return lo + 0.5 * (hi - lo) * (std::tanh(raw) + 1.0);
}

double soft_clamp_derivative(double raw, double lo, double hi) {
  const double t = std::tanh(raw);
  return 0.5 * (hi - lo) * (1.0 - t * t);
}

SquashedSample squashed_gaussian(double mu, double log_sigma, double z, double limit) {
  const double sigma = std::exp(log_sigma);
  const double u = mu + sigma * z;
  const double t = std::tanh(u);
  SquashedSample s;
  s.action = limit * t;
  s.log_prob = -0.5 * z * z - log_sigma - 0.5 * kLog2Pi - std::log(limit) -
               log_one_minus_tanh_sq(u);
  const double du_dls = sigma * z;  // z held fixed (reparameterization)
  s.dlogp_dmu = 2.0 * t;
  s.dlogp_dlog_sigma = -1.0 + 2.0 * t * du_dls;
  const double da_du = limit * (1.0 - t * t);
  s.da_dmu = da_du;
  s.da_dlog_sigma = da_du * du_dls;
  return s;
}

SacAgent::SacAgent(const SacConfig& config)
    : config_(config),
      policy_(net_sizes(config.state_dim, config.hidden, 2 * config.action_dim),
              mix_seed(config.seed, 0x5ac, 1)),
      q1_(net_sizes(config.state_dim + config.action_dim, config.hidden, 1),
          mix_seed(config.seed, 0x5ac, 2)),
      q2_(net_sizes(config.state_dim + config.action_dim, config.hidden, 1),
          mix_seed(config.seed, 0x5ac, 3)),
      q1_target_(q1_),
      q2_target_(q2_),
      log_alpha_(std::log(config.init_alpha)),
      rng_(mix_seed(config.seed, 0x5ac, 4)) {
  if (config_.action_dim < 1 || config_.state_dim < 1 || config_.hidden < 1 ||
      config_.batch_size < 1 || config_.action_limit <= 0.0 || config_.tau <= 0.0 ||
      config_.tau >= 1.0 || config_.init_alpha <= 0.0) {
    throw ConfigError("SacConfig: invalid settings");
  }
}

SacAgent::PolicyEval SacAgent::eval_policy(const Eigen::MatrixXd& states, bool with_noise) {
  const Eigen::Index n = states.rows();
  const int ad = config_.action_dim;
  PolicyEval pe;
  pe.raw = policy_.forward_cached(states, pe.cache);
  pe.actions.resize(n, ad);
  pe.log_prob = Eigen::VectorXd::Zero(n);
  pe.dlogp_dmu.resize(n, ad);
  pe.dlogp_dls.resize(n, ad);
  pe.da_dmu.resize(n, ad);
  pe.da_dls.resize(n, ad);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < ad; ++k) {
      const double mu = pe.raw(i, k);
      const double ls = soft_clamp(pe.raw(i, ad + k), config_.log_sigma_min, config_.log_sigma_max);
      const double z = with_noise ? rng_.normal() : 0.0;
      const SquashedSample s = squashed_gaussian(mu, ls, z, config_.action_limit);
      pe.actions(i, k) = s.action;
      pe.log_prob(i) += s.log_prob;
      pe.dlogp_dmu(i, k) = s.dlogp_dmu;
      pe.dlogp_dls(i, k) = s.dlogp_dlog_sigma;
      pe.da_dmu(i, k) = s.da_dmu;
      pe.da_dls(i, k) = s.da_dlog_sigma;
    }
  }
  return pe;
}

Eigen::VectorXd SacAgent::act(const Eigen::VectorXd& state) {
  PolicyEval pe = eval_policy(state.transpose(), true);
  return pe.actions.row(0).transpose();
}

Eigen::VectorXd SacAgent::act_mean(const Eigen::VectorXd& state) const {
  const Eigen::MatrixXd out = policy_.forward(state.transpose());
  Eigen::VectorXd a(config_.action_dim);
  for (int k = 0; k < config_.action_dim; ++k) {
    a(k) = config_.action_limit * std::tanh(out(0, k));
  }
  return a;
}

Eigen::VectorXd SacAgent::critic_targets(const std::vector<Transition>& batch) {
  const auto n = static_cast<Eigen::Index>(batch.size());
  const int sd = config_.state_dim;
  const int ad = config_.action_dim;
  Eigen::MatrixXd S2(n, sd);
  Eigen::VectorXd reward(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    S2.row(i) = batch[static_cast<std::size_t>(i)].next_state.transpose();
    reward(i) = -batch[static_cast<std::size_t>(i)].cost;
  }
  PolicyEval pe = eval_policy(S2, true);
  Eigen::MatrixXd in(n, sd + ad);
  in << S2, pe.actions;
  const Eigen::VectorXd q1 = q1_target_.forward(in).col(0);
  const Eigen::VectorXd q2 = q2_target_.forward(in).col(0);
  const double a = alpha();
  return reward.array() +
         config_.gamma * (q1.cwiseMin(q2).array() - a * pe.log_prob.array());
}

double SacAgent::critic_loss_on(const std::vector<Transition>& batch) {
  // Deterministic evaluation: next actions at the policy mean (z = 0).
  const auto n = static_cast<Eigen::Index>(batch.size());
  const int sd = config_.state_dim;
  const int ad = config_.action_dim;
  Eigen::MatrixXd S(n, sd), A(n, ad), S2(n, sd);
  Eigen::VectorXd reward(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Transition& t = batch[static_cast<std::size_t>(i)];
    S.row(i) = t.state.transpose();
    A.row(i) = t.action.transpose();
    S2.row(i) = t.next_state.transpose();
    reward(i) = -t.cost;
  }
  PolicyEval pe = eval_policy(S2, false);
  Eigen::MatrixXd in2(n, sd + ad);
  in2 << S2, pe.actions;
  const Eigen::VectorXd q1t = q1_target_.forward(in2).col(0);
  const Eigen::VectorXd q2t = q2_target_.forward(in2).col(0);
  const Eigen::VectorXd y = reward.array() + config_.gamma * (q1t.cwiseMin(q2t).array() -
                                                              alpha() * pe.log_prob.array());
  Eigen::MatrixXd in(n, sd + ad);
  in << S, A;
  const Eigen::VectorXd q = q1_.forward(in).col(0);
  return (q - y).squaredNorm() / static_cast<double>(n);
}

SacStepStats SacAgent::update_on_batch(const std::vector<Transition>& batch) {
  if (batch.empty()) throw FitError("SacAgent: empty batch");
  const auto n = static_cast<Eigen::Index>(batch.size());
  const double inv_n = 1.0 / static_cast<double>(n);
  const int sd = config_.state_dim;
  const int ad = config_.action_dim;

  Eigen::MatrixXd S(n, sd), A(n, ad);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Transition& t = batch[static_cast<std::size_t>(i)];
    if (t.state.size() != sd || t.action.size() != ad || t.next_state.size() != sd) {
      throw ConfigError("SacAgent: transition dimensions do not match the agent");
    }
    S.row(i) = t.state.transpose();
    A.row(i) = t.action.transpose();
  }

  SacStepStats stats;
  const Eigen::VectorXd y = critic_targets(batch);

  // Critic updates: mean squared error against the frozen targets.
  Eigen::MatrixXd in(n, sd + ad);
  in << S, A;
  for (Mlp* critic : {&q1_, &q2_}) {
    Mlp::Cache cache;
    const Eigen::VectorXd q = critic->forward_cached(in, cache).col(0);
    const Eigen::VectorXd diff = q - y;
    const double loss = diff.squaredNorm() * inv_n;
    if (critic == &q1_) {
      stats.critic1_loss = loss;
    } else {
      stats.critic2_loss = loss;
    }
    MlpGradients grads = critic->zero_gradients();
    const Eigen::MatrixXd grad_out = (2.0 * inv_n) * diff;
    critic->backward(cache, grad_out, grads);
    critic->adam_step(grads, config_.lr);
  }

  // Actor update through fresh action samples and the double-Q minimum.
  PolicyEval pe = eval_policy(S, true);
  Eigen::MatrixXd in_a(n, sd + ad);
  in_a << S, pe.actions;
  Mlp::Cache c1, c2;
  const Eigen::VectorXd qa1 = q1_.forward_cached(in_a, c1).col(0);
  const Eigen::VectorXd qa2 = q2_.forward_cached(in_a, c2).col(0);
  const double a = alpha();
  stats.actor_loss = (a * pe.log_prob.array() - qa1.cwiseMin(qa2).array()).mean();

  Eigen::MatrixXd gq1 = Eigen::MatrixXd::Zero(n, 1);
  Eigen::MatrixXd gq2 = Eigen::MatrixXd::Zero(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (qa1(i) <= qa2(i)) {
      gq1(i, 0) = -inv_n;
    } else {
      gq2(i, 0) = -inv_n;
    }
  }
  const Eigen::MatrixXd din = q1_.input_gradient(c1, gq1) + q2_.input_gradient(c2, gq2);
  const Eigen::MatrixXd dj_da = din.rightCols(ad);

  Eigen::MatrixXd grad_policy(n, 2 * ad);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < ad; ++k) {
      const double dmu = a * inv_n * pe.dlogp_dmu(i, k) + dj_da(i, k) * pe.da_dmu(i, k);
      const double dls = a * inv_n * pe.dlogp_dls(i, k) + dj_da(i, k) * pe.da_dls(i, k);
      grad_policy(i, k) = dmu;
      grad_policy(i, ad + k) =
          dls * soft_clamp_derivative(pe.raw(i, ad + k), config_.log_sigma_min,
                                      config_.log_sigma_max);
    }
  }
  MlpGradients pgrads = policy_.zero_gradients();
  policy_.backward(pe.cache, grad_policy, pgrads);
  policy_.adam_step(pgrads, config_.lr);

  // Temperature update toward the entropy target.
  stats.mean_log_prob = pe.log_prob.mean();
  const double galpha = -a * (stats.mean_log_prob + config_.target_entropy);
  ++alpha_t_;
  alpha_m_ = 0.9 * alpha_m_ + 0.1 * galpha;
  alpha_v_ = 0.999 * alpha_v_ + 0.001 * galpha * galpha;
  const double mc = alpha_m_ / (1.0 - std::pow(0.9, static_cast<double>(alpha_t_)));
  const double vc = alpha_v_ / (1.0 - std::pow(0.999, static_cast<double>(alpha_t_)));
  log_alpha_ -= config_.lr * mc / (std::sqrt(vc) + 1e-8);
  stats.alpha = alpha();

  q1_target_.polyak_from(q1_, config_.tau);
  q2_target_.polyak_from(q2_, config_.tau);
  return stats;
}

SacStepStats SacAgent::update(const ReplayBuffers& buffers, int steps) {
  SacStepStats stats;
  for (int i = 0; i < steps; ++i) {
    const std::vector<Transition> batch =
        buffers.sample_batch(static_cast<std::size_t>(config_.batch_size), rng_);
    stats = update_on_batch(batch);
  }
  return stats;
}

}  // namespace phykrig
