#include "phykrig/replay.hpp"

#include <algorithm>

#include "phykrig/errors.hpp"

namespace phykrig {

namespace {

void check_finite(const Transition& t) {
  if (!t.state.allFinite() || !t.action.allFinite() || !t.next_state.allFinite() ||
      !std::isfinite(t.cost)) {
    throw ConfigError("ReplayBuffers: non-finite transition rejected");
  }
}

}  // namespace

ReplayBuffers::ReplayBuffers(std::size_t real_capacity, std::size_t model_capacity)
    : real_capacity_(real_capacity), model_capacity_(model_capacity) {}

void ReplayBuffers::push_real(const Transition& t) {
  if (t.model_generated) {
    throw ConfigError("ReplayBuffers: model-generated transition pushed to the real buffer");
  }
  check_finite(t);
  real_.push_back(t);
  if (real_capacity_ > 0 && real_.size() > real_capacity_) real_.pop_front();
}

void ReplayBuffers::push_model(const Transition& t) {
  if (!t.model_generated) {
    throw ConfigError("ReplayBuffers: real transition pushed to the model buffer");
  }
  check_finite(t);
  model_.push_back(t);
  if (model_capacity_ > 0 && model_.size() > model_capacity_) model_.pop_front();
}

void ReplayBuffers::clear_model() { model_.clear(); }

std::pair<std::size_t, std::size_t> batch_split(std::size_t batch, bool model_empty) {
  if (batch == 0) return {0, 0};
  if (model_empty) return {batch, 0};
  const std::size_t real = std::max<std::size_t>(1, batch / 11);
  return {real, batch - real};
}

std::vector<Transition> ReplayBuffers::sample_batch(std::size_t batch, Rng& rng) const {
  if (real_.empty()) throw FitError("ReplayBuffers: cannot sample, real buffer is empty");
  const auto [n_real, n_model] = batch_split(batch, model_.empty());
  std::vector<Transition> out;
  out.reserve(batch);
  for (std::size_t i = 0; i < n_real; ++i) {
    out.push_back(real_[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(real_.size())))]);
  }
  for (std::size_t i = 0; i < n_model; ++i) {
    out.push_back(
        model_[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(model_.size())))]);
  }
  return out;
}

}  // namespace phykrig
