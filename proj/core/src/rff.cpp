#include "phykrig/rff.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "phykrig/rng.hpp"

namespace phykrig {

RFFMap make_rff_map(int input_dim, int feature_count, double lengthscale, std::uint64_t seed) {
  if (input_dim < 1) throw std::invalid_argument("make_rff_map: input_dim must be >= 1");
  if (feature_count < 1) throw std::invalid_argument("make_rff_map: feature_count must be >= 1");
  if (!(lengthscale > 0.0)) throw std::invalid_argument("make_rff_map: lengthscale must be > 0");

  Rng rng(mix_seed(seed, 0x4ff));
  RFFMap map;
  map.lengthscale = lengthscale;
  map.omega.resize(feature_count, input_dim);
  map.phase.resize(feature_count);
  for (int i = 0; i < feature_count; ++i) {
    for (int j = 0; j < input_dim; ++j) {
      map.omega(i, j) = rng.normal() / lengthscale;
    }
  }
  for (int i = 0; i < feature_count; ++i) {
    map.phase(i) = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  return map;
}

Eigen::MatrixXd rff_features(const RFFMap& map, const Eigen::MatrixXd& X) {
  if (X.cols() != map.input_dim()) {
    throw std::invalid_argument("rff_features: input dimension does not match the map");
  }
  const double scale = std::sqrt(2.0 / static_cast<double>(map.feature_count()));
  Eigen::MatrixXd M = (-(X * map.omega.transpose())).rowwise() + map.phase.transpose();
  return scale * M.array().cos().matrix();
}

}  // namespace phykrig
