#include "streamkl/subset_selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "streamkl/errors.hpp"

namespace streamkl {

int choose_K(const WeightDistribution& p, double delta) {
  if (p.p.size() < 1) throw std::invalid_argument("choose_K: empty distribution");
  if (delta < 0.0 || delta >= 1.0) throw std::invalid_argument("choose_K: delta must be in [0, 1)");
  const double p_star = p.p.maxCoeff();
  int count = 0;
  for (Eigen::Index i = 0; i < p.p.size(); ++i) {
    if (p.p[i] / p_star > delta) ++count;
  }
  return count;
}

std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t value = 1;
  for (int i = 1; i <= k; ++i) {
    // value * (n - k + i) / i is exact at every step.
    const std::uint64_t numer = static_cast<std::uint64_t>(n - k + i);
    if (value > (cap + 1) / numer * static_cast<std::uint64_t>(i)) return cap + 1;
    value = value * numer / static_cast<std::uint64_t>(i);
    if (value > cap) return cap + 1;
  }
  return value;
}

SubsetCollection build_exhaustive(int P, int K, std::uint64_t max_subsets) {
  if (P < 1 || K < 1 || K > P) throw std::invalid_argument("build_exhaustive: need 1 <= K <= P");
  const std::uint64_t count = binomial_capped(P, K, max_subsets);
  if (count > max_subsets) {
    throw CapacityError("build_exhaustive: C(P, K) exceeds the configured cap");
  }

  SubsetCollection collection;
  collection.num_kernels = P;
  collection.target_size = K;
  collection.frequency = static_cast<int>(binomial_capped(P - 1, K - 1, max_subsets));
  collection.subsets.reserve(count);

  std::vector<int> current(K);
  std::iota(current.begin(), current.end(), 0);
  while (true) {
    collection.subsets.push_back(current);
    int pos = K - 1;
    while (pos >= 0 && current[pos] == P - K + pos) --pos;
    if (pos < 0) break;
    ++current[pos];
    for (int j = pos + 1; j < K; ++j) current[j] = current[j - 1] + 1;
  }
  return collection;
}

SubsetCollection build_balls_bins(int P, int J, int K, double gamma, Rng& rng) {
  if (P < 1 || J < 1) throw std::invalid_argument("build_balls_bins: need P >= 1 and J >= 1");
  const int bins = static_cast<int>(std::floor(gamma * P));
  if (bins < J) throw std::invalid_argument("build_balls_bins: bin count below frequency J");

  std::vector<std::vector<int>> bin_contents(bins);
  std::vector<int> bin_ids(bins);
  for (int ball = 0; ball < P; ++ball) {
    // Partial Fisher-Yates: the first J entries are J distinct bins.
    std::iota(bin_ids.begin(), bin_ids.end(), 0);
    for (int j = 0; j < J; ++j) {
      const int pick = j + static_cast<int>(rng.integer(static_cast<std::uint64_t>(bins - j)));
      std::swap(bin_ids[j], bin_ids[pick]);
      bin_contents[bin_ids[j]].push_back(ball);
    }
  }

  SubsetCollection collection;
  collection.num_kernels = P;
  collection.target_size = K;
  collection.frequency = J;
  for (auto& bin : bin_contents) {
    if (!bin.empty()) collection.subsets.push_back(std::move(bin));
  }
  return collection;
}

bool has_uniform_frequency(const SubsetCollection& collection) {
  std::vector<int> counts(collection.num_kernels, 0);
  for (const auto& subset : collection.subsets) {
    if (subset.empty()) return false;
    for (int i : subset) {
      if (i < 0 || i >= collection.num_kernels) return false;
      ++counts[i];
    }
  }
  return std::all_of(counts.begin(), counts.end(),
                     [&](int c) { return c == collection.frequency; });
}

SubsetPMF subset_pmf(const SubsetCollection& collection, const WeightState& state) {
  if (state.cumulative_loss.size() != collection.num_kernels) {
    throw std::invalid_argument("subset_pmf: weight state size mismatch");
  }
  if (!has_uniform_frequency(collection)) {
    throw InvariantViolation("subset_pmf: collection violates uniform frequency");
  }
  const Eigen::ArrayXd shifted =
      -state.eta_g * (state.cumulative_loss.array() - state.cumulative_loss.minCoeff());
  const Eigen::ArrayXd w = shifted.exp();
  const double denom = collection.frequency * w.sum();

  Eigen::VectorXd alpha(static_cast<Eigen::Index>(collection.subsets.size()));
  for (std::size_t j = 0; j < collection.subsets.size(); ++j) {
    double mass = 0.0;
    for (int i : collection.subsets[j]) mass += w[i];
    alpha[static_cast<Eigen::Index>(j)] = mass / denom;
  }
  return SubsetPMF{alpha};
}

int sample_subset(const SubsetPMF& pmf, Rng& rng) {
  if (pmf.alpha.size() < 1) throw std::invalid_argument("sample_subset: empty PMF");
  const double u = rng.uniform() * pmf.alpha.sum();
  double cdf = 0.0;
  for (Eigen::Index j = 0; j < pmf.alpha.size(); ++j) {
    cdf += pmf.alpha[j];
    if (u < cdf) return static_cast<int>(j);
  }
  return static_cast<int>(pmf.alpha.size() - 1);
}

SubsetCollection build_collection(int P, int K, const SelectionParams& params, Rng& rng) {
  const auto cap = static_cast<std::uint64_t>(std::floor(params.gamma_cap * P));
  if (binomial_capped(P, K, cap) <= cap) {
    return build_exhaustive(P, K, cap);
  }
  const int bins = static_cast<int>(cap);
  int J = std::max(1, static_cast<int>(std::lround(params.gamma_cap * K)));
  J = std::min(J, bins);
  return build_balls_bins(P, J, K, params.gamma_cap, rng);
}

}  // namespace streamkl
