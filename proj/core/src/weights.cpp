#include "streamkl/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace streamkl {

WeightState make_weight_state(int num_kernels, double eta_g) {
  if (num_kernels < 1) throw std::invalid_argument("make_weight_state: need at least one kernel");
  if (eta_g <= 0.0) throw std::invalid_argument("make_weight_state: eta_g must be positive");
  return WeightState{Eigen::VectorXd::Zero(num_kernels), eta_g};
}

WeightState accumulate(const WeightState& state, const Eigen::VectorXd& losses,
                       bool labeled) {
  if (!labeled) return state;
  if (losses.size() != state.cumulative_loss.size()) {
    throw std::invalid_argument("accumulate: loss vector size mismatch");
  }
  if (!losses.allFinite() || (losses.array() < 0.0).any()) {
    throw std::invalid_argument("accumulate: losses must be finite and nonnegative");
  }
  return WeightState{state.cumulative_loss + losses, state.eta_g};
}

WeightDistribution distribution(const WeightState& state) {
  // log w_i = -eta_g C_i; shifting by the smallest C (largest log weight)
  // keeps every exponent <= 0.
  const Eigen::ArrayXd shifted =
      -state.eta_g * (state.cumulative_loss.array() - state.cumulative_loss.minCoeff());
  const Eigen::ArrayXd w = shifted.exp();
  return WeightDistribution{(w / w.sum()).matrix()};
}

WeightDistribution restricted_distribution(const WeightState& state,
                                           std::span<const int> subset) {
  if (subset.empty()) throw std::invalid_argument("restricted_distribution: empty subset");
  const auto P = state.cumulative_loss.size();
  double min_loss = 0.0;
  bool first = true;
  for (int i : subset) {
    if (i < 0 || i >= P) throw std::invalid_argument("restricted_distribution: index out of range");
    if (first || state.cumulative_loss[i] < min_loss) min_loss = state.cumulative_loss[i];
    first = false;
  }
  Eigen::VectorXd w(static_cast<Eigen::Index>(subset.size()));
  for (std::size_t j = 0; j < subset.size(); ++j) {
    w[static_cast<Eigen::Index>(j)] =
        std::exp(-state.eta_g * (state.cumulative_loss[subset[j]] - min_loss));
  }
  return WeightDistribution{w / w.sum()};
}

double combine(const Eigen::VectorXd& predictions, const WeightDistribution& weights,
               std::span<const int> subset) {
  if (static_cast<std::size_t>(weights.p.size()) != subset.size()) {
    throw std::invalid_argument("combine: weights not aligned with subset");
  }
  double value = 0.0;
  for (std::size_t j = 0; j < subset.size(); ++j) {
    const int i = subset[j];
    if (i < 0 || i >= predictions.size()) throw std::invalid_argument("combine: index out of range");
    value += weights.p[static_cast<Eigen::Index>(j)] * predictions[i];
  }
  return value;
}

}  // namespace streamkl
