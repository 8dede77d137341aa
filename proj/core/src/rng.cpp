#include "phykrig/rng.hpp"

namespace phykrig {

namespace {
std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

std::uint64_t mix_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b) {
  return splitmix(splitmix(splitmix(root) ^ a) ^ b);
}

}  // namespace phykrig
