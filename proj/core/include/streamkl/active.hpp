#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "streamkl/weights.hpp"

namespace streamkl {

// Stream-based labeling policy. eta_c is the confidence threshold; M caps
// the number of consecutive unlabeled samples so local updates never
// starve.
struct ActiveConfig {
  double eta_c = 5e-4;
  int M = 1;
  bool enabled = false;
};

struct LabelHistory {
  std::vector<std::uint8_t> decisions;  // a_t bits in stream order
  int consecutive_skips = 0;            // trailing zeros in `decisions`
};

// Confidence condition: max over reference kernels j in [P] of
// sum_{i in subset} p(i) (f_i - f_j)^2 <= eta_c. The discrepancy loss is
// the plain squared difference (no regularizer) and p is the full
// dictionary distribution, not renormalized over the subset.
bool confidence_check(const Eigen::VectorXd& kernel_predictions,
                      const WeightDistribution& p, std::span<const int> subset,
                      double eta_c);

// a_t = 0 iff active learning is enabled, the learner is confident, the
// skip guard has room (fewer than M trailing skips) and at least one
// decision exists (the first sample is always labeled). Appends the
// decision to the history.
int decide(LabelHistory& history, bool confident, const ActiveConfig& config);

// Fraction of labeled samples. With the M guard this is never below
// 1 / (M + 1).
double efficiency(const LabelHistory& history);

}  // namespace streamkl
