#include "phykrig/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "phykrig/errors.hpp"
#include "phykrig/rng.hpp"

namespace phykrig {

OptimizeResult optimize_hyperparams(const Objective& objective, const Eigen::VectorXd& initial,
                                    const OptimizerConfig& config) {
  if (config.iterations < 0 || config.restarts < 1) {
    throw std::invalid_argument("optimize_hyperparams: need restarts >= 1 and iterations >= 0");
  }
  if (config.learning_rate <= 0.0) {
    throw std::invalid_argument("optimize_hyperparams: learning rate must be positive");
  }

  Rng rng(mix_seed(config.seed, 0x0b7));
  const Eigen::Index dim = initial.size();

  OptimizeResult best;
  best.value = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool any_start_finite = false;

  auto consider = [&](const Eigen::VectorXd& params, double value) {
    if (std::isfinite(value) && value < best.value) {
      best.value = value;
      best.params = params;
    }
  };

  for (const Eigen::VectorXd& preset : config.preset_starts) {
    if (preset.size() != dim) {
      throw std::invalid_argument("optimize_hyperparams: preset start has wrong length");
    }
  }

  for (int r = 0; r < config.restarts; ++r) {
    Eigen::VectorXd theta = initial;
    if (r > 0) {
      const std::size_t preset_index = static_cast<std::size_t>(r - 1);
      if (preset_index < config.preset_starts.size()) {
        theta = config.preset_starts[preset_index];
      } else {
        for (Eigen::Index i = 0; i < dim; ++i) theta(i) += config.restart_stddev * rng.normal();
      }
    }

    Eigen::VectorXd grad(dim);
    double value = objective(theta, grad);
    ++evaluations;
    if (!std::isfinite(value) || !grad.allFinite()) continue;
    any_start_finite = true;
    consider(theta, value);

    Eigen::VectorXd m = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    for (int t = 1; t <= config.iterations; ++t) {
      m = config.beta1 * m + (1.0 - config.beta1) * grad;
      v = config.beta2 * v.array().matrix() + (1.0 - config.beta2) * grad.array().square().matrix();
      const double bias1 = 1.0 - std::pow(config.beta1, t);
      const double bias2 = 1.0 - std::pow(config.beta2, t);
      const Eigen::ArrayXd m_hat = m.array() / bias1;
      const Eigen::ArrayXd v_hat = v.array() / bias2;
      theta.array() -= config.learning_rate * m_hat / (v_hat.sqrt() + config.epsilon);

      value = objective(theta, grad);
      ++evaluations;
      if (!std::isfinite(value) || !grad.allFinite()) break;
      consider(theta, value);
    }
  }

  if (!any_start_finite) {
    throw OptimizationError(
        "optimize_hyperparams: objective non-finite at the initial point of every restart");
  }
  best.evaluations = evaluations;
  return best;
}

}  // namespace phykrig
