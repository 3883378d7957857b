#include "streamkl/random_features.hpp"

#include <cmath>
#include <stdexcept>

#include "streamkl/rng.hpp"

namespace streamkl {

RandomFeatureMap::RandomFeatureMap(const KernelSpec& kernel, int num_features,
                                   int input_dim, std::uint64_t seed)
    : kernel_(kernel), seed_(seed) {
  if (num_features < 1) throw std::invalid_argument("RandomFeatureMap: num_features must be >= 1");
  if (input_dim < 1) throw std::invalid_argument("RandomFeatureMap: input_dim must be >= 1");
  if (kernel.sigma2 <= 0.0) throw std::invalid_argument("RandomFeatureMap: sigma2 must be positive");

  Rng rng(seed);
  const double freq_std = 1.0 / std::sqrt(kernel.sigma2);
  frequencies_.resize(num_features, input_dim);
  for (int i = 0; i < num_features; ++i) {
    for (int j = 0; j < input_dim; ++j) {
      frequencies_(i, j) = freq_std * rng.gaussian();
    }
  }
}

Eigen::VectorXd RandomFeatureMap::transform(const Eigen::VectorXd& x) const {
  if (x.size() != frequencies_.cols()) {
    throw std::invalid_argument("RandomFeatureMap::transform: dimension mismatch");
  }
  const int d = num_features();
  const Eigen::VectorXd args = frequencies_ * x;
  Eigen::VectorXd z(2 * d);
  z.head(d) = args.array().sin();
  z.tail(d) = args.array().cos();
  z /= std::sqrt(static_cast<double>(d));
  return z;
}

RandomFeatureMap sample_frequencies(const KernelSpec& kernel, int num_features,
                                    int input_dim, std::uint64_t seed) {
  return RandomFeatureMap(kernel, num_features, input_dim, seed);
}

}  // namespace streamkl
