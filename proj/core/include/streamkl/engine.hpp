#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "streamkl/active.hpp"
#include "streamkl/dataset.hpp"
#include "streamkl/kernels.hpp"
#include "streamkl/local_model.hpp"
#include "streamkl/random_features.hpp"
#include "streamkl/rng.hpp"
#include "streamkl/subset_selection.hpp"
#include "streamkl/weights.hpp"

namespace streamkl {

enum class Variant {
  raker,           // all kernels, all labels
  omkl_aks,        // adaptive kernel selection
  amkl,            // active labeling, all kernels
  amkl_aks,        // active labeling + kernel selection
  single_kernel,   // P = 1 degenerate case
  budgeted_kernel, // handled by the baselines module, rejected here
};

std::string variant_name(Variant variant);
Variant variant_from_name(const std::string& name);

// Per-kernel feature construction. `identity` (z = x, valid because the
// data pipeline emits unit-norm inputs) backs the linear baseline through
// the same engine; it requires a single-kernel dictionary.
enum class FeatureKind { random_fourier, identity };

struct AlgorithmConfig {
  Variant variant = Variant::raker;
  std::vector<KernelSpec> dictionary;
  int num_features = 50;  // D; each model has 2D parameters
  double eta_l = 0.0;
  double eta_g = 0.0;
  double lambda = 0.01;
  SelectionParams selection;
  ActiveConfig active;
  std::uint64_t seed = 0;
  FeatureKind feature_kind = FeatureKind::random_fourier;
  // Feed the full regularized loss into the EXP weights (the OGD update
  // always uses it); false restricts the weight losses to the squared
  // prediction error, for sensitivity studies.
  bool regularized_weight_loss = true;
  int budget = 50;  // budgeted_kernel only, consumed by the baselines module

  bool selection_enabled() const {
    return variant == Variant::omkl_aks || variant == Variant::amkl_aks;
  }
};

struct TraceRecord {
  long t = 0;               // 1-based step index
  double prediction = 0.0;  // yhat_t, formed before the label decision
  double label = 0.0;       // true label (known to the evaluator, not always to the learner)
  int a = 1;                // 1 = labeled, 0 = skipped
  int k_t = 0;              // subset-size parameter in effect at t
  std::vector<int> subset;  // V_{s_t} used for the prediction
  std::vector<double> kernel_losses;  // per-kernel losses (labeled steps only)
  double running_mse = 0.0;
  double running_al_eff = 0.0;
  double virtual_prediction = 0.0;  // shadow learner output (diagnostics)
};

using Trace = std::vector<TraceRecord>;

// Runs one stream variant: local OGD on every kernel, EXP weights, the
// optional confidence-gated labeling decision and the optional randomized
// subset selection. A virtual shadow accumulates the same per-kernel
// losses as if every label were revealed; it feeds property checks only
// and is never read by the learner's own updates.
class Engine {
 public:
  Engine(AlgorithmConfig config, int input_dim);

  // Combined prediction from the current state; does not advance time.
  double predict(const Eigen::VectorXd& x) const;

  // Advances one step. The label is consumed by the learner only when the
  // decision comes out a_t = 1; the prediction is formed strictly before
  // the decision.
  TraceRecord step(const Eigen::VectorXd& x, double y);

  Trace run(std::span<const StreamSample> stream);

  const AlgorithmConfig& config() const { return config_; }
  int input_dim() const { return input_dim_; }
  int num_kernels() const { return static_cast<int>(models_.size()); }
  long current_step() const { return step_; }
  const std::vector<LocalModel>& models() const { return models_; }
  const WeightState& weights() const { return weights_; }
  const std::vector<int>& current_subset() const { return subset_; }
  int current_k() const { return k_target_; }
  const LabelHistory& history() const { return history_; }
  const std::vector<RandomFeatureMap>& feature_maps() const { return maps_; }

  // Virtual-OMKL shadow: EXP weights over the same kernel functions with
  // every label revealed.
  const WeightState& virtual_weights() const { return virtual_weights_; }
  WeightDistribution virtual_distribution() const { return distribution(virtual_weights_); }

  void save_checkpoint(std::ostream& out) const;
  void save_checkpoint(const std::string& path) const;
  static Engine load_checkpoint(std::istream& in);
  static Engine load_checkpoint(const std::string& path);

 private:
  Eigen::VectorXd featurize(int kernel, const Eigen::VectorXd& x) const;

  AlgorithmConfig config_;
  int input_dim_ = 0;
  std::vector<RandomFeatureMap> maps_;
  std::vector<LocalModel> models_;
  WeightState weights_;
  WeightState virtual_weights_;
  std::vector<int> subset_;
  int k_target_ = 0;
  LabelHistory history_;
  long step_ = 0;
  double squared_error_sum_ = 0.0;
  long labeled_count_ = 0;
  Rng collection_rng_;
  Rng subset_rng_;
};

struct RegretReport {
  double learner_cumulative_loss = 0.0;        // sum_t (yhat_t - y_t)^2
  Eigen::VectorXd comparator_cumulative_loss;  // per-kernel hindsight losses
  int best_kernel = 0;
  double regret = 0.0;
};

// Cumulative learner loss minus the best fixed kernel's hindsight-optimal
// loss. The comparator solves the per-kernel ridge problem with effective
// ridge lambda * T and pays its regularizer in the comparison, matching
// the per-step regularized loss summed over the stream.
RegretReport compute_regret(const AlgorithmConfig& config,
                            std::span<const StreamSample> stream, const Trace& trace);
RegretReport compute_regret(const std::vector<RandomFeatureMap>& maps, double lambda,
                            std::span<const StreamSample> stream, const Trace& trace);

}  // namespace streamkl
