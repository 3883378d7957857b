#include "streamkl/active.hpp"

#include <stdexcept>

namespace streamkl {

bool confidence_check(const Eigen::VectorXd& kernel_predictions,
                      const WeightDistribution& p, std::span<const int> subset,
                      double eta_c) {
  if (subset.empty()) throw std::invalid_argument("confidence_check: empty subset");
  if (p.p.size() != kernel_predictions.size()) {
    throw std::invalid_argument("confidence_check: distribution size mismatch");
  }
  double worst = 0.0;
  for (Eigen::Index j = 0; j < kernel_predictions.size(); ++j) {
    double discrepancy = 0.0;
    for (int i : subset) {
      const double gap = kernel_predictions[i] - kernel_predictions[j];
      discrepancy += p.p[i] * gap * gap;
    }
    worst = std::max(worst, discrepancy);
  }
  return worst <= eta_c;
}

int decide(LabelHistory& history, bool confident, const ActiveConfig& config) {
  if (config.M < 1) throw std::invalid_argument("decide: M must be >= 1");
  const bool guard_open =
      !history.decisions.empty() && history.consecutive_skips < config.M;
  const int a = (config.enabled && confident && guard_open) ? 0 : 1;
  history.decisions.push_back(static_cast<std::uint8_t>(a));
  history.consecutive_skips = (a == 0) ? history.consecutive_skips + 1 : 0;
  return a;
}

double efficiency(const LabelHistory& history) {
  if (history.decisions.empty()) throw std::invalid_argument("efficiency: empty history");
  long labeled = 0;
  for (auto a : history.decisions) labeled += a;
  return static_cast<double>(labeled) / static_cast<double>(history.decisions.size());
}

}  // namespace streamkl
