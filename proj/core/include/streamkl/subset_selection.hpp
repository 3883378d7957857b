#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "streamkl/rng.hpp"
#include "streamkl/weights.hpp"

namespace streamkl {

// Parameters of the adaptive subset-size rule and the collection
// construction. delta is the weight-ratio threshold picking K_t; gamma_cap
// bounds the collection size at floor(gamma_cap * P) bins.
struct SelectionParams {
  double delta = 0.8;
  double gamma_cap = 2.0;
};

// A collection Omega(J, K) of kernel-index subsets with uniform
// frequency: every kernel appears in exactly J subsets.
struct SubsetCollection {
  std::vector<std::vector<int>> subsets;
  int frequency = 0;    // J
  int target_size = 0;  // K
  int num_kernels = 0;  // P
};

struct SubsetPMF {
  Eigen::VectorXd alpha;
};

// K = |{i : p(i) / max_j p(j) > delta}|. The argmax kernel always
// qualifies, so 1 <= K <= P.
int choose_K(const WeightDistribution& p, double delta);

// C(n, k) saturated at `cap + 1` so callers can test the size switch
// without overflow.
std::uint64_t binomial_capped(int n, int k, std::uint64_t cap);

// All C(P, K) subsets, J = K C(P,K) / P (an integer, = C(P-1, K-1)).
// Throws CapacityError when C(P, K) exceeds max_subsets.
SubsetCollection build_exhaustive(int P, int K, std::uint64_t max_subsets);

// Balls-bins construction: floor(gamma * P) bins, each kernel dropped
// into J distinct bins chosen uniformly without replacement. Bin sizes
// are emergent (K on average); empty bins are removed, which keeps the
// per-kernel frequency at exactly J.
SubsetCollection build_balls_bins(int P, int J, int K, double gamma, Rng& rng);

// True when every kernel index in [P] occurs in exactly J subsets.
bool has_uniform_frequency(const SubsetCollection& collection);

// alpha(j) = sum_{i in V_j} w(i) / (J sum_i w(i)), computed with the same
// shift stabilization as the weight distribution. Uniform frequency makes
// this a valid PMF; an InvariantViolation is thrown if it does not hold.
SubsetPMF subset_pmf(const SubsetCollection& collection, const WeightState& state);

// Inverse-CDF draw of a subset index.
int sample_subset(const SubsetPMF& pmf, Rng& rng);

// The strategy used by the engine: exhaustive when C(P, K) fits within
// floor(gamma_cap * P) subsets, balls-bins with gamma = gamma_cap
// otherwise (J = round(gamma_cap * K), lowered until J <= bin count).
SubsetCollection build_collection(int P, int K, const SelectionParams& params, Rng& rng);

}  // namespace streamkl
