#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "streamkl/kernels.hpp"

namespace streamkl {

// Random Fourier features for a shift-invariant kernel. For a Gaussian
// kernel the spectral density is N(0, sigma^-2 I); the map
//
//   z(x) = (1/sqrt(D)) [sin(v_1'x), ..., sin(v_D'x), cos(v_1'x), ..., cos(v_D'x)]
//
// satisfies |z(x)| = 1 for every x and E[z(x)'z(x')] = kappa(x - x').
// Frequencies are drawn once at construction from a seeded generator and
// never mutated, so maps are safe to share across threads.
class RandomFeatureMap {
 public:
  RandomFeatureMap(const KernelSpec& kernel, int num_features, int input_dim,
                   std::uint64_t seed);

  Eigen::VectorXd transform(const Eigen::VectorXd& x) const;

  int num_features() const { return static_cast<int>(frequencies_.rows()); }
  int input_dim() const { return static_cast<int>(frequencies_.cols()); }
  int feature_dim() const { return 2 * num_features(); }
  const KernelSpec& kernel() const { return kernel_; }
  std::uint64_t seed() const { return seed_; }
  const Eigen::MatrixXd& frequencies() const { return frequencies_; }

 private:
  KernelSpec kernel_;
  std::uint64_t seed_ = 0;
  Eigen::MatrixXd frequencies_;  // num_features x input_dim
};

RandomFeatureMap sample_frequencies(const KernelSpec& kernel, int num_features,
                                    int input_dim, std::uint64_t seed);

inline Eigen::VectorXd rf_map(const RandomFeatureMap& map, const Eigen::VectorXd& x) {
  return map.transform(x);
}

}  // namespace streamkl
