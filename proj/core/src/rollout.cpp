#include "phykrig/rollout.hpp"

#include <algorithm>
#include <cmath>

#include "phykrig/errors.hpp"

namespace phykrig {

std::vector<Transition> run_model_episode(const DynamicsModel& dynamics, const Policy& policy,
                                          const CostFunction& cost, const EpisodeSpec& spec,
                                          Rng& rng) {
  std::vector<Transition> out;
  out.reserve(static_cast<std::size_t>(spec.horizon));
  Eigen::VectorXd state = spec.initial_mean;
  for (Eigen::Index i = 0; i < state.size(); ++i) state(i) += spec.initial_stddev * rng.normal();
  if (!state.allFinite()) return out;
  state = dynamics.state_box().clip(state);

  for (int t = 0; t < spec.horizon; ++t) {
    Eigen::VectorXd action = policy(state);
    if (action.size() != 1 || !action.allFinite()) return out;
    action(0) = std::clamp(action(0), -spec.action_limit, spec.action_limit);

    PredictiveDistribution pred;
    try {
      pred = dynamics.predict_next(state, action);
    } catch (const NumericalError&) {
      return out;
    }
    Eigen::VectorXd next(pred.mean.cols());
    for (Eigen::Index j = 0; j < next.size(); ++j) {
      const double var = std::max(0.0, pred.variance(0, j));
      next(j) = pred.mean(0, j) + std::sqrt(var) * rng.normal();
    }
    if (!next.allFinite()) return out;
    next = dynamics.state_box().clip(next);

    const double c = cost(next);
    if (!std::isfinite(c)) return out;

    Transition tr;
    tr.state = state;
    tr.action = action;
    tr.cost = c;
    tr.next_state = next;
    tr.model_generated = true;
    out.push_back(std::move(tr));
    state = next;
  }
  return out;
}

}  // namespace phykrig
