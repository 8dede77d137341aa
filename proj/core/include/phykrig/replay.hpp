#pragma once

#include <cstddef>
#include <deque>
#include <utility>
#include <vector>

#include "phykrig/rng.hpp"
#include "phykrig/transition.hpp"

namespace phykrig {

// Dual FIFO experience store: D_R holds only real transitions, D_M only
// model-generated ones. Inserting a transition into the wrong side throws.
class ReplayBuffers {
public:
  // capacity 0 = unbounded; otherwise oldest entries are dropped first.
  explicit ReplayBuffers(std::size_t real_capacity = 0, std::size_t model_capacity = 0);

  void push_real(const Transition& t);
  void push_model(const Transition& t);
  void clear_model();

  std::size_t real_size() const { return real_.size(); }
  std::size_t model_size() const { return model_.size(); }

  const std::deque<Transition>& real_data() const { return real_; }
  const std::deque<Transition>& model_data() const { return model_; }

  // Sample `batch` transitions with replacement: real and model tuples mixed
  // 1:10 when the model buffer is populated, all real otherwise. Throws if
  // the real buffer is empty.
  std::vector<Transition> sample_batch(std::size_t batch, Rng& rng) const;

private:
  std::deque<Transition> real_, model_;
  std::size_t real_capacity_, model_capacity_;
};

// (real, model) counts for one batch: all real when the model side is empty,
// otherwise real = max(1, batch / 11) and model = batch - real.
std::pair<std::size_t, std::size_t> batch_split(std::size_t batch, bool model_empty);

}  // namespace phykrig
