#include "phykrig/physics.hpp"

#include <cmath>
#include <stdexcept>

#include "phykrig/pendulum.hpp"

namespace phykrig {

Eigen::MatrixXd PhysicsModel::evaluate_batch(const Eigen::MatrixXd& X) const {
  if (X.cols() != input_dim()) {
    throw std::invalid_argument("PhysicsModel: input dimension mismatch");
  }
  Eigen::MatrixXd Y(X.rows(), output_dim());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    Y.row(i) = evaluate(X.row(i).transpose()).transpose();
  }
  return Y;
}

double forrester_true(double x) {
  const double t = 6.0 * x - 2.0;
  return 0.25 * t * t * std::sin(12.0 * x - 4.0);
}

double forrester_crude(double x) {
  return 0.25 * (0.5 * forrester_true(x) + 10.0 * (x - 0.5) + 5.0);
}

Eigen::VectorXd ForresterCrudeModel::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != 1) throw std::invalid_argument("ForresterCrudeModel: expects 1-d input");
  Eigen::VectorXd y(1);
  y(0) = forrester_crude(x(0));
  return y;
}

std::map<std::string, std::string> ForresterCrudeModel::describe() const {
  return {{"kind", "forrester-crude"}};
}

Eigen::VectorXd ZeroModel::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != in_) throw std::invalid_argument("ZeroModel: input dimension mismatch");
  return Eigen::VectorXd::Zero(out_);
}

std::map<std::string, std::string> ZeroModel::describe() const {
  return {{"kind", "zero"},
          {"input_dim", std::to_string(in_)},
          {"output_dim", std::to_string(out_)}};
}

std::unique_ptr<PhysicsModel> physics_from_description(
    const std::map<std::string, std::string>& desc) {
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = desc.find(key);
    if (it == desc.end()) {
      throw std::invalid_argument("physics_from_description: missing key '" + key + "'");
    }
    return it->second;
  };
  const std::string& kind = need("kind");
  if (kind == "forrester-crude") {
    return std::make_unique<ForresterCrudeModel>();
  }
  if (kind == "zero") {
    return std::make_unique<ZeroModel>(std::stoi(need("input_dim")),
                                       std::stoi(need("output_dim")));
  }
  if (kind == "pendulum") {
    PendulumParams p;
    p.cart_mass = std::stod(need("cart_mass"));
    p.pole_mass = std::stod(need("pole_mass"));
    p.length = std::stod(need("length"));
    p.damping = std::stod(need("damping"));
    p.gravity = std::stod(need("gravity"));
    OdeStepConfig step;
    step.step_size = std::stod(need("step_size"));
    step.substeps = std::stoi(need("substeps"));
    return std::make_unique<PendulumModel>(p, step);
  }
  throw std::invalid_argument("physics_from_description: unknown kind '" + kind + "'");
}

}  // namespace phykrig
