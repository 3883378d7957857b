#pragma once

#include <Eigen/Core>
#include <span>

namespace streamkl {

// EXP-strategy state over P kernels. Weights are kept in the log domain
// as -eta_g * cumulative_loss; the exponents grow linearly with the
// stream length, so raw exp values would underflow long before desk
// scale. For the active variants the cumulative losses only include
// labeled steps (a_t = 1).
struct WeightState {
  Eigen::VectorXd cumulative_loss;
  double eta_g = 1.0;
};

WeightState make_weight_state(int num_kernels, double eta_g);

struct WeightDistribution {
  Eigen::VectorXd p;
};

// Adds per-kernel losses when `labeled`, returns the state unchanged
// otherwise. Losses must be finite and nonnegative.
WeightState accumulate(const WeightState& state, const Eigen::VectorXd& losses,
                       bool labeled);

// Softmax of -eta_g * cumulative_loss, shift-stabilized.
WeightDistribution distribution(const WeightState& state);

// Weights renormalized over a nonempty subset of kernel indices.
WeightDistribution restricted_distribution(const WeightState& state,
                                           std::span<const int> subset);

// Convex combination of the subset's predictions; `weights` is aligned
// with `subset` element-for-element.
double combine(const Eigen::VectorXd& predictions, const WeightDistribution& weights,
               std::span<const int> subset);

}  // namespace streamkl
