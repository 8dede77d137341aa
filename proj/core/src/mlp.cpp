#include "phykrig/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "phykrig/rng.hpp"

namespace phykrig {

Mlp::Mlp(const std::vector<int>& sizes, std::uint64_t seed) : sizes_(sizes) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp: needs at least input and output sizes");
  for (int s : sizes_) {
    if (s < 1) throw std::invalid_argument("Mlp: layer sizes must be positive");
  }
  Rng rng(mix_seed(seed, 0x317));
  const std::size_t layers = sizes_.size() - 1;
  W_.resize(layers);
  b_.resize(layers);
  mW_.resize(layers);
  vW_.resize(layers);
  mb_.resize(layers);
  vb_.resize(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const int fan_in = sizes_[l];
    const int fan_out = sizes_[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    W_[l].resize(fan_out, fan_in);
    for (Eigen::Index i = 0; i < W_[l].rows(); ++i) {
      for (Eigen::Index j = 0; j < W_[l].cols(); ++j) {
        W_[l](i, j) = rng.uniform(-bound, bound);
      }
    }
    b_[l] = Eigen::VectorXd::Zero(fan_out);
    mW_[l] = Eigen::MatrixXd::Zero(fan_out, fan_in);
    vW_[l] = Eigen::MatrixXd::Zero(fan_out, fan_in);
    mb_[l] = Eigen::VectorXd::Zero(fan_out);
    vb_[l] = Eigen::VectorXd::Zero(fan_out);
  }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd a = X;
  const std::size_t layers = W_.size();
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = (a * W_[l].transpose()).rowwise() + b_[l].transpose();
    a = (l + 1 < layers) ? z.cwiseMax(0.0) : z;
  }
  return a;
}

Eigen::MatrixXd Mlp::forward_cached(const Eigen::MatrixXd& X, Cache& cache) const {
  const std::size_t layers = W_.size();
  cache.input = X;
  cache.pre.assign(layers, {});
  cache.post.assign(layers, {});
  Eigen::MatrixXd a = X;
  for (std::size_t l = 0; l < layers; ++l) {
    cache.pre[l] = (a * W_[l].transpose()).rowwise() + b_[l].transpose();
    cache.post[l] = (l + 1 < layers) ? cache.pre[l].cwiseMax(0.0) : cache.pre[l];
    a = cache.post[l];
  }
  return a;
}

Eigen::MatrixXd Mlp::backward(const Cache& cache, const Eigen::MatrixXd& grad_output,
                              MlpGradients& grads) const {
  const std::size_t layers = W_.size();
  if (grads.dW.size() != layers) grads = zero_gradients();
  Eigen::MatrixXd delta = grad_output;  // dLoss/d(pre-activation of the layer above activation)
  for (std::size_t l = layers; l-- > 0;) {
    if (l + 1 < layers) {
      // ReLU derivative at the cached pre-activation.
      delta = delta.cwiseProduct(
          (cache.pre[l].array() > 0.0).cast<double>().matrix());
    }
    const Eigen::MatrixXd& below = (l == 0) ? cache.input : cache.post[l - 1];
    grads.dW[l] += delta.transpose() * below;
    grads.db[l] += delta.colwise().sum().transpose();
    delta = delta * W_[l];  // now dLoss/d(post-activation of layer l-1)
  }
  return delta;
}

Eigen::MatrixXd Mlp::input_gradient(const Cache& cache, const Eigen::MatrixXd& grad_output) const {
  const std::size_t layers = W_.size();
  Eigen::MatrixXd delta = grad_output;
  for (std::size_t l = layers; l-- > 0;) {
    if (l + 1 < layers) {
      delta = delta.cwiseProduct((cache.pre[l].array() > 0.0).cast<double>().matrix());
    }
    delta = delta * W_[l];
  }
  return delta;
}

void Mlp::adam_step(const MlpGradients& grads, double lr) {
  ++adam_t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(adam_t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(adam_t_));
  for (std::size_t l = 0; l < W_.size(); ++l) {
    mW_[l] = beta1_ * mW_[l] + (1.0 - beta1_) * grads.dW[l];
    vW_[l].array() = beta2_ * vW_[l].array() + (1.0 - beta2_) * grads.dW[l].array().square();
    W_[l].array() -= lr * (mW_[l].array() / c1) / ((vW_[l].array() / c2).sqrt() + eps_);
    mb_[l] = beta1_ * mb_[l] + (1.0 - beta1_) * grads.db[l];
    vb_[l].array() = beta2_ * vb_[l].array() + (1.0 - beta2_) * grads.db[l].array().square();
    b_[l].array() -= lr * (mb_[l].array() / c1) / ((vb_[l].array() / c2).sqrt() + eps_);
  }
}

void Mlp::polyak_from(const Mlp& source, double tau) {
  for (std::size_t l = 0; l < W_.size(); ++l) {
    W_[l] = tau * source.W_[l] + (1.0 - tau) * W_[l];
    b_[l] = tau * source.b_[l] + (1.0 - tau) * b_[l];
  }
}

Eigen::Index Mlp::param_count() const {
  Eigen::Index n = 0;
  for (std::size_t l = 0; l < W_.size(); ++l) n += W_[l].size() + b_[l].size();
  return n;
}

Eigen::VectorXd Mlp::flatten() const {
  Eigen::VectorXd flat(param_count());
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < W_.size(); ++l) {
    flat.segment(at, W_[l].size()) = Eigen::Map<const Eigen::VectorXd>(W_[l].data(), W_[l].size());
    at += W_[l].size();
    flat.segment(at, b_[l].size()) = b_[l];
    at += b_[l].size();
  }
  return flat;
}

void Mlp::set_from_flat(const Eigen::VectorXd& flat) {
  if (flat.size() != param_count()) throw std::invalid_argument("Mlp: flat size mismatch");
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < W_.size(); ++l) {
    Eigen::Map<Eigen::VectorXd>(W_[l].data(), W_[l].size()) = flat.segment(at, W_[l].size());
    at += W_[l].size();
    b_[l] = flat.segment(at, b_[l].size());
    at += b_[l].size();
  }
}

Eigen::VectorXd Mlp::flatten_gradients(const MlpGradients& grads) const {
  Eigen::VectorXd flat(param_count());
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < W_.size(); ++l) {
    flat.segment(at, W_[l].size()) =
        Eigen::Map<const Eigen::VectorXd>(grads.dW[l].data(), grads.dW[l].size());
    at += W_[l].size();
    flat.segment(at, b_[l].size()) = grads.db[l];
    at += b_[l].size();
  }
  return flat;
}

MlpGradients Mlp::zero_gradients() const {
  MlpGradients g;
  g.dW.resize(W_.size());
  g.db.resize(b_.size());
  for (std::size_t l = 0; l < W_.size(); ++l) {
    g.dW[l] = Eigen::MatrixXd::Zero(W_[l].rows(), W_[l].cols());
    g.db[l] = Eigen::VectorXd::Zero(b_[l].size());
  }
  return g;
}

}  // namespace phykrig
