#pragma once

#include <Eigen/Dense>

namespace phykrig {

// One environment step. `model_generated` marks transitions sampled from a
// learned dynamics model rather than the real system.
struct Transition {
  Eigen::VectorXd state;
  Eigen::VectorXd action;
  double cost = 0.0;
  Eigen::VectorXd next_state;
  bool model_generated = false;
};

}  // namespace phykrig
