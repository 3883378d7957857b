#include "streamkl/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace streamkl {

double exact_kernel(const KernelSpec& kernel, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& xp) {
  if (kernel.sigma2 <= 0.0) throw std::invalid_argument("exact_kernel: sigma2 must be positive");
  if (x.size() != xp.size()) throw std::invalid_argument("exact_kernel: dimension mismatch");
  return std::exp(-(x - xp).squaredNorm() / (2.0 * kernel.sigma2));
}

std::vector<KernelSpec> standard_dictionary() {
  std::vector<KernelSpec> dict;
  dict.reserve(17);
  for (int i = 0; i < 17; ++i) {
    dict.push_back({KernelFamily::gaussian, std::pow(10.0, (i - 8) / 2.0)});
  }
  return dict;
}

int closest_kernel_index(const std::vector<KernelSpec>& dictionary, double sigma2) {
  if (dictionary.empty()) throw std::invalid_argument("closest_kernel_index: empty dictionary");
  int best = 0;
  double best_gap = std::abs(std::log10(dictionary[0].sigma2) - std::log10(sigma2));
  for (int i = 1; i < static_cast<int>(dictionary.size()); ++i) {
    const double gap = std::abs(std::log10(dictionary[i].sigma2) - std::log10(sigma2));
    if (gap < best_gap) {
      best = i;
      best_gap = gap;
    }
  }
  return best;
}

}  // namespace streamkl
