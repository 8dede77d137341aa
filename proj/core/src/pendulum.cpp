#include "phykrig/pendulum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "phykrig/errors.hpp"
#include "phykrig/rng.hpp"

namespace phykrig {

void PendulumParams::validate() const {
  if (!(cart_mass > 0.0) || !(pole_mass > 0.0) || !(length > 0.0)) {
    throw std::invalid_argument("PendulumParams: masses and length must be positive");
  }
  if (damping < 0.0) {
    throw std::invalid_argument("PendulumParams: damping must be non-negative");
  }
}

Eigen::Vector4d pendulum_ode(const Eigen::Vector4d& state, double action,
                             const PendulumParams& p) {
  const double xd = state(2);
  const double thd = state(3);
  const double s = std::sin(state(1));
  const double c = std::cos(state(1));
  const double total = p.cart_mass + p.pole_mass;
  const double denom = 4.0 * total - 3.0 * p.pole_mass * c * c;

  const double xdd = (2.0 * p.pole_mass * p.length * thd * thd * s +
                      3.0 * p.pole_mass * p.gravity * s * c + 4.0 * action -
                      4.0 * p.damping * xd) /
                     denom;
  const double thdd = (-3.0 * p.pole_mass * p.length * thd * thd * s * c -
                       4.0 * total * p.gravity * s - 6.0 * (action - p.damping * xd) * c) /
                      (p.length * denom);
  return Eigen::Vector4d(xd, thd, xdd, thdd);
}

Eigen::VectorXd integrate_step(const OdeRhs& rhs, const Eigen::VectorXd& state, double action,
                               const OdeStepConfig& config) {
  if (config.substeps < 1) throw std::invalid_argument("integrate_step: substeps must be >= 1");
  if (!(config.step_size > 0.0)) {
    throw std::invalid_argument("integrate_step: step_size must be positive");
  }
  const double h = config.step_size / static_cast<double>(config.substeps);
  Eigen::VectorXd s = state;
  for (int i = 0; i < config.substeps; ++i) {
    const Eigen::VectorXd k1 = rhs(s, action);
    const Eigen::VectorXd k2 = rhs(s + 0.5 * h * k1, action);
    const Eigen::VectorXd k3 = rhs(s + 0.5 * h * k2, action);
    const Eigen::VectorXd k4 = rhs(s + h * k3, action);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!s.allFinite()) {
      throw IntegrationError("integrate_step: non-finite state at sub-step " + std::to_string(i),
                             i);
    }
  }
  return s;
}

bool DomainBox::contains(const Eigen::VectorXd& x) const {
  return (x.array() >= low.array()).all() && (x.array() <= high.array()).all();
}

Eigen::VectorXd DomainBox::clip(const Eigen::VectorXd& x) const {
  return x.cwiseMax(low).cwiseMin(high);
}

const DomainBox& pendulum_input_box() {
  static const DomainBox box = [] {
    const double pi = std::numbers::pi;
    DomainBox b;
    b.low = Eigen::VectorXd(5);
    b.high = Eigen::VectorXd(5);
    b.low << -6.0, -2.0 * pi, -10.0, -25.0, -10.0;
    b.high << 6.0, 4.0 * pi, 10.0, 25.0, 10.0;
    return b;
  }();
  return box;
}

const DomainBox& pendulum_state_box() {
  static const DomainBox box = [] {
    DomainBox b;
    b.low = pendulum_input_box().low.head(4);
    b.high = pendulum_input_box().high.head(4);
    return b;
  }();
  return box;
}

PendulumModel::PendulumModel(const PendulumParams& params, const OdeStepConfig& step)
    : params_(params), step_(step) {
  params_.validate();
}

Eigen::Vector4d PendulumModel::step(const Eigen::Vector4d& state, double action) const {
  const auto rhs = [this](const Eigen::VectorXd& s, double a) -> Eigen::VectorXd {
    return pendulum_ode(Eigen::Vector4d(s), a, params_);
  };
  return integrate_step(rhs, state, action, step_);
}

Eigen::VectorXd PendulumModel::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != 5) throw std::invalid_argument("PendulumModel: expects [state, action] input");
  return step(x.head<4>(), x(4));
}

std::map<std::string, std::string> PendulumModel::describe() const {
  auto fmt = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  return {{"kind", "pendulum"},
          {"cart_mass", fmt(params_.cart_mass)},
          {"pole_mass", fmt(params_.pole_mass)},
          {"length", fmt(params_.length)},
          {"damping", fmt(params_.damping)},
          {"gravity", fmt(params_.gravity)},
          {"step_size", fmt(step_.step_size)},
          {"substeps", std::to_string(step_.substeps)}};
}

PendulumModel make_perturbed_pendulum(std::uint64_t seed, const OdeStepConfig& step) {
  Rng rng(mix_seed(seed, 0x9e7));
  PendulumParams p;
  p.cart_mass = rng.uniform(0.4, 0.6);
  p.pole_mass = rng.uniform(0.5, 0.7);
  p.length = rng.uniform(0.5, 0.7);
  p.damping = 0.0;
  return PendulumModel(p, step);
}

}  // namespace phykrig
