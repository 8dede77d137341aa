#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <string>

namespace phykrig {

// A cheap deterministic predictor used as the prior mean / multiplicative
// base of the surrogate models. Implementations must return finite values
// everywhere on their declared domain.
class PhysicsModel {
public:
  virtual ~PhysicsModel() = default;
  virtual int input_dim() const = 0;
  virtual int output_dim() const = 0;
  virtual Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const = 0;
  // Row-wise batch evaluation; returns n x output_dim.
  Eigen::MatrixXd evaluate_batch(const Eigen::MatrixXd& X) const;
  // Key-value description sufficient to reconstruct the model (serialization).
  virtual std::map<std::string, std::string> describe() const = 0;
};

// One-dimensional test function with a scaled/shifted crude approximation:
//   f_true(x) = 1/4 (6x - 2)^2 sin(12x - 4)
//   f_crude(x) = 1/4 (f_true(x)/2 + 10 (x - 1/2) + 5)
double forrester_true(double x);
double forrester_crude(double x);

class ForresterCrudeModel final : public PhysicsModel {
public:
  int input_dim() const override { return 1; }
  int output_dim() const override { return 1; }
  Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const override;
  std::map<std::string, std::string> describe() const override;
};

// Constant-zero predictor (the "no physics" prior for plain GP regression).
class ZeroModel final : public PhysicsModel {
public:
  ZeroModel(int input_dim, int output_dim) : in_(input_dim), out_(output_dim) {}
  int input_dim() const override { return in_; }
  int output_dim() const override { return out_; }
  Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const override;
  std::map<std::string, std::string> describe() const override;

private:
  int in_, out_;
};

// Rebuild a physics model from its describe() output. Throws
// std::invalid_argument for unknown kinds or missing keys.
std::unique_ptr<PhysicsModel> physics_from_description(
    const std::map<std::string, std::string>& desc);

}  // namespace phykrig
