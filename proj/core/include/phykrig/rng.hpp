#pragma once

#include <cstdint>
#include <random>

namespace phykrig {

// Deterministic stream derivation: splitmix64 finalizer folded over the root
// seed and up to two stream indices. Every component that needs randomness
// derives its own stream so that adding draws in one place never shifts the
// draws seen somewhere else.
std::uint64_t mix_seed(std::uint64_t root, std::uint64_t a = 0, std::uint64_t b = 0);

class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double normal() { return normal_(gen_); }
  // Uniform integer in [0, n).
  int uniform_int(int n) { return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(gen_)); }
  std::uint64_t next_u64() { return gen_(); }

private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace phykrig
