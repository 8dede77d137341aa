#pragma once

#include <functional>
#include <vector>

#include "phykrig/dynamics.hpp"
#include "phykrig/pendulum_env.hpp"

namespace phykrig {

// Scalar cost of a state, evaluated on sampled model states during rollouts.
using CostFunction = std::function<double(const Eigen::VectorXd& state)>;

// One synthetic episode through a transition model: at every step the next
// state is a single Gaussian sample from the per-dimension predictive
// marginals, clipped to the model's state box. A non-finite sample truncates
// the trajectory (a shorter list is returned, never an error). All emitted
// transitions are flagged model-generated. With zero predictive variance the
// trajectory equals the deterministic mean rollout exactly.
std::vector<Transition> run_model_episode(const DynamicsModel& dynamics, const Policy& policy,
                                          const CostFunction& cost, const EpisodeSpec& spec,
                                          Rng& rng);

}  // namespace phykrig
