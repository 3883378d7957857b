#pragma once

#include <optional>
#include <string>
#include <vector>

#include "streamkl/dataset.hpp"
#include "streamkl/engine.hpp"

namespace streamkl {

// Everything the CLI can run: the RF-based engine variants plus the
// comparison-table baselines.
enum class Method {
  raker,
  omkl_aks,
  amkl,
  amkl_aks,
  kl_rbf,   // single Gaussian kernel through the RF pipeline
  linear,   // identity features
  poly2,    // exact polynomial kernel, expansion learner
  poly3,
  omkl,     // non-RF multi-kernel expansion learner, large budget
  omkl_b,   // budgeted variant
};

std::string method_name(Method method);
Method method_from_name(const std::string& name);

struct SyntheticSpec {
  double generating_sigma2 = 1.0;
  double noise_std = 0.0;
  long T = 5000;
  int dim = 10;
  int centers = 32;
  bool nonnegative = false;  // skewed labels (mass near zero)
};

struct RunConfig {
  Method method = Method::raker;
  // Data source: exactly one of manifest_path / synthetic.
  std::string manifest_path;
  std::optional<SyntheticSpec> synthetic;

  std::vector<double> dictionary_sigma2;  // empty = standard 17-kernel dictionary
  int num_features = 50;
  double eta_l = 0.0;  // <= 0 resolves to 1/sqrt(T)
  double eta_g = 0.0;  // <= 0 resolves to 1/sqrt(T)
  double lambda = 0.01;
  double delta = 0.8;
  double gamma_cap = 2.0;
  double eta_c = 5e-4;
  int M = 1;
  std::uint64_t seed = 1;
  double rbf_sigma2 = 1.0;  // kl_rbf
  int budget = 50;          // omkl_b
  int full_budget_cap = 2000;  // support-point cap standing in for an unbounded budget
  bool regularized_weight_loss = true;

  std::string out_dir;  // empty = no files
  bool emit_trace = false;
  bool emit_summary = true;
  bool emit_plot_data = false;
  bool with_regret = false;  // test mode: hindsight comparator over the full stream
};

struct MetricsSummary {
  std::string method;
  long steps = 0;
  long labeled = 0;
  double final_mse = 0.0;
  double final_al_eff = 1.0;
  double eta_l = 0.0;
  double eta_g = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> mse_curve;
  std::vector<int> k_curve;
  std::optional<RegretReport> regret;
  std::string dataset;
  std::string content_hash;  // raw-file hash when a manifest was used
};

// Loads data per the config, resolves auto step sizes, dispatches to the
// engine or a baseline runner, writes the requested artifacts and returns
// the summary. Deterministic for a fixed (config, seed).
MetricsSummary run_experiment(const RunConfig& config);

// As above but over a preloaded stream (used by tests and sweep/compare
// to avoid reloading).
MetricsSummary run_experiment_on(const RunConfig& config,
                                 std::span<const StreamSample> stream,
                                 const std::string& dataset_label,
                                 const std::string& content_hash = "");

struct ComparisonRow {
  std::string method;
  double final_mse = 0.0;
  double final_al_eff = 1.0;
};

struct ComparisonTable {
  std::string dataset;
  std::vector<ComparisonRow> rows;
  std::string text;  // aligned, MSE reported in 1e-3 units
};

// Runs >= 2 configs that must share the data source and aligns their final
// metrics. Throws std::invalid_argument otherwise.
ComparisonTable compare(const std::vector<RunConfig>& configs);

struct SweepPoint {
  double eta_c = 0.0;
  double mean_mse = 0.0;
  double mean_al_eff = 0.0;
};

// Accuracy-efficiency tradeoff: reruns the config for every eta_c in the
// grid and every seed, averaging final metrics per grid point.
std::vector<SweepPoint> sweep_eta_c(const RunConfig& base, const std::vector<double>& grid,
                                    const std::vector<std::uint64_t>& seeds);

// Trace CSV with a versioned header comment; columns
// t,yhat,y,a,K,subset,mse,al_eff with subset as ;-joined 0-based indices.
void write_trace_csv(const std::string& path, const Trace& trace);
Trace read_trace_csv(const std::string& path);

}  // namespace streamkl
