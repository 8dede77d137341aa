#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace phykrig {

// Gradients for every layer of an Mlp, in layer order.
struct MlpGradients {
  std::vector<Eigen::MatrixXd> dW;
  std::vector<Eigen::VectorXd> db;
};

// Small dense network with ReLU hidden layers and a linear output layer.
// Batches are row-major (one sample per row). Backpropagation and the Adam
// update are written out explicitly so the whole stack stays dependency-free
// and finite-difference checkable.
class Mlp {
public:
  // sizes = {input, hidden..., output}; weights use Glorot-uniform init.
  Mlp(const std::vector<int>& sizes, std::uint64_t seed);

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }

  Eigen::MatrixXd forward(const Eigen::MatrixXd& X) const;

  // Forward pass keeping pre/post activations for backward().
  struct Cache {
    Eigen::MatrixXd input;
    std::vector<Eigen::MatrixXd> pre;   // per layer, before activation
    std::vector<Eigen::MatrixXd> post;  // per layer, after activation
  };
  Eigen::MatrixXd forward_cached(const Eigen::MatrixXd& X, Cache& cache) const;

  // grad_output = dLoss/dY for the cached forward pass. Fills `grads` and
  // returns dLoss/dX. The caller owns any 1/batch scaling.
  Eigen::MatrixXd backward(const Cache& cache, const Eigen::MatrixXd& grad_output,
                           MlpGradients& grads) const;
  // dLoss/dX only, parameter gradients discarded.
  Eigen::MatrixXd input_gradient(const Cache& cache, const Eigen::MatrixXd& grad_output) const;

  void adam_step(const MlpGradients& grads, double lr);

  // this <- tau * source + (1 - tau) * this, parameters only.
  void polyak_from(const Mlp& source, double tau);

  // Flat parameter vector (weights then bias, layer by layer); used by
  // finite-difference checks and serialization.
  Eigen::Index param_count() const;
  Eigen::VectorXd flatten() const;
  void set_from_flat(const Eigen::VectorXd& flat);
  Eigen::VectorXd flatten_gradients(const MlpGradients& grads) const;

  MlpGradients zero_gradients() const;

private:
  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> W_;  // out x in
  std::vector<Eigen::VectorXd> b_;
  // Adam state
  std::vector<Eigen::MatrixXd> mW_, vW_;
  std::vector<Eigen::VectorXd> mb_, vb_;
  long long adam_t_ = 0;
  double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
};

}  // namespace phykrig
