#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace phykrig {

// Fixed-step-count Adam with multi-start. Restart 0 starts from the given
// initial point; restarts 1..k consume `preset_starts` in order while any
// remain; every later restart perturbs the initial point with
// N(0, restart_stddev^2) noise drawn from a stream derived from `seed`. The
// best parameter vector over every evaluation of every restart wins.
struct OptimizerConfig {
  int iterations = 500;
  double learning_rate = 0.05;
  int restarts = 3;
  double restart_stddev = 1.0;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Deterministic alternative starting points tried before any random
  // perturbations. Each must match the parameter length; extras beyond the
  // restart budget are ignored.
  std::vector<Eigen::VectorXd> preset_starts;
};

struct OptimizeResult {
  Eigen::VectorXd params;
  double value = 0.0;
  int evaluations = 0;
};

// Objective returns the value and fills `grad` (same length as params).
using Objective = std::function<double(const Eigen::VectorXd& params, Eigen::VectorXd& grad)>;

// Throws OptimizationError if the objective is non-finite at the initial
// point of every restart; a restart that goes non-finite mid-run is abandoned
// (best-so-far is kept).
OptimizeResult optimize_hyperparams(const Objective& objective, const Eigen::VectorXd& initial,
                                    const OptimizerConfig& config);

}  // namespace phykrig
