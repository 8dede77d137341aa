#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "phykrig/physics.hpp"

namespace phykrig {

// Cart-pole with a uniform rod pendulum. State is [x, theta, xdot, thetadot]
// with theta = pi at the hanging start and theta unwrapped (no modular
// reduction anywhere). The action is a horizontal force on the cart.
struct PendulumParams {
  double cart_mass = 0.5;   // m_c
  double pole_mass = 0.5;   // m_p
  double length = 0.6;      // l, full rod length
  double damping = 0.1;     // b, cart friction
  double gravity = 9.81;    // g

  void validate() const;  // throws std::invalid_argument on non-physical values
};

// Time derivative of the state:
//   s = sin(theta), c = cos(theta)
//   xdd  = (2 m_p l thd^2 s + 3 m_p g s c + 4 a - 4 b xd) / (4 (m_c + m_p) - 3 m_p c^2)
//   thdd = (-3 m_p l thd^2 s c - 4 (m_c + m_p) g s - 6 (a - b xd) c)
//          / (4 l (m_c + m_p) - 3 m_p l c^2)
Eigen::Vector4d pendulum_ode(const Eigen::Vector4d& state, double action,
                             const PendulumParams& params);

struct OdeStepConfig {
  double step_size = 0.1;  // one control interval
  int substeps = 8;        // RK4 sub-steps per control interval
};

// Classic RK4 over `substeps` equal sub-intervals with the action held
// constant. Throws IntegrationError (with the sub-step index) if any
// intermediate state goes non-finite.
using OdeRhs = std::function<Eigen::VectorXd(const Eigen::VectorXd& state, double action)>;
Eigen::VectorXd integrate_step(const OdeRhs& rhs, const Eigen::VectorXd& state, double action,
                               const OdeStepConfig& config);

// Axis-aligned trusted region for surrogate queries.
struct DomainBox {
  Eigen::VectorXd low, high;
  bool contains(const Eigen::VectorXd& x) const;
  Eigen::VectorXd clip(const Eigen::VectorXd& x) const;
  int dim() const { return static_cast<int>(low.size()); }
};

// Input box over [x, theta, xdot, thetadot, a]:
//   x in [-6, 6], theta in [-2 pi, 4 pi], xdot in [-10, 10],
//   thetadot in [-25, 25], a in [-10, 10].
const DomainBox& pendulum_input_box();
// The first four dimensions of the input box (next-state clipping).
const DomainBox& pendulum_state_box();

// Physics model mapping [state, action] (5) to the next state (4) by RK4.
class PendulumModel final : public PhysicsModel {
public:
  PendulumModel(const PendulumParams& params, const OdeStepConfig& step);
  int input_dim() const override { return 5; }
  int output_dim() const override { return 4; }
  Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const override;
  Eigen::Vector4d step(const Eigen::Vector4d& state, double action) const;
  const PendulumParams& params() const { return params_; }
  const OdeStepConfig& step_config() const { return step_; }
  std::map<std::string, std::string> describe() const override;

private:
  PendulumParams params_;
  OdeStepConfig step_;
};

// Imperfect physics prior: true parameter values replaced by draws
//   m_c ~ U(0.4, 0.6), m_p ~ U(0.5, 0.7), l ~ U(0.5, 0.7)
// and the damping term dropped entirely (b = 0).
PendulumModel make_perturbed_pendulum(std::uint64_t seed, const OdeStepConfig& step = {});

}  // namespace phykrig
