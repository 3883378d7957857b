#pragma once

#include <Eigen/Core>
#include <vector>

namespace streamkl {

enum class KernelFamily { gaussian };

// A shift-invariant kernel. Only the Gaussian family is implemented; the
// enum is the extension point for other shift-invariant families
// (Laplacian, Cauchy).
struct KernelSpec {
  KernelFamily family = KernelFamily::gaussian;
  double sigma2 = 1.0;  // Gaussian bandwidth sigma^2 > 0
};

// exp(-|x - xp|^2 / (2 sigma^2)). Used as the ground-truth oracle when
// testing the random-feature approximation.
double exact_kernel(const KernelSpec& kernel, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& xp);

// The 17-kernel Gaussian dictionary used by the benchmark experiments:
// sigma2 = 10^{(i - 8) / 2} for i = 0..16.
std::vector<KernelSpec> standard_dictionary();

// Index of the dictionary kernel whose bandwidth is closest to sigma2 on
// a log scale.
int closest_kernel_index(const std::vector<KernelSpec>& dictionary, double sigma2);

}  // namespace streamkl
