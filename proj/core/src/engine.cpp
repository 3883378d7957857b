#include "streamkl/engine.hpp"

#include <Eigen/Cholesky>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "streamkl/errors.hpp"

namespace streamkl {

using nlohmann::json;

std::string variant_name(Variant variant) {
  switch (variant) {
    case Variant::raker: return "raker";
    case Variant::omkl_aks: return "omkl_aks";
    case Variant::amkl: return "amkl";
    case Variant::amkl_aks: return "amkl_aks";
    case Variant::single_kernel: return "single_kernel";
    case Variant::budgeted_kernel: return "budgeted_kernel";
  }
  throw std::invalid_argument("variant_name: unknown variant");
}

Variant variant_from_name(const std::string& name) {
  if (name == "raker") return Variant::raker;
  if (name == "omkl_aks") return Variant::omkl_aks;
  if (name == "amkl") return Variant::amkl;
  if (name == "amkl_aks") return Variant::amkl_aks;
  if (name == "single_kernel") return Variant::single_kernel;
  if (name == "budgeted_kernel") return Variant::budgeted_kernel;
  throw std::invalid_argument("variant_from_name: unknown variant '" + name + "'");
}

namespace {

void validate_config(const AlgorithmConfig& cfg) {
  if (cfg.variant == Variant::budgeted_kernel) {
    throw std::invalid_argument("Engine: budgeted_kernel runs through the baselines module");
  }
  if (cfg.dictionary.empty()) throw std::invalid_argument("Engine: empty kernel dictionary");
  if (cfg.eta_l <= 0.0 || cfg.eta_g <= 0.0) {
    throw std::invalid_argument("Engine: eta_l and eta_g must be positive");
  }
  if (cfg.lambda < 0.0) throw std::invalid_argument("Engine: lambda must be nonnegative");
  if (cfg.num_features < 1 && cfg.feature_kind == FeatureKind::random_fourier) {
    throw std::invalid_argument("Engine: num_features must be >= 1");
  }
  if (cfg.selection.delta < 0.0 || cfg.selection.delta >= 1.0) {
    throw std::invalid_argument("Engine: delta must be in [0, 1)");
  }
  if (cfg.active.M < 1) throw std::invalid_argument("Engine: M must be >= 1");
  for (const auto& kernel : cfg.dictionary) {
    if (kernel.sigma2 <= 0.0) throw std::invalid_argument("Engine: kernel sigma2 must be positive");
  }
  // Variant-flag consistency: only the active variants may enable the
  // labeling policy; disabling it on an active variant is the documented
  // degenerate mode used by the equivalence checks.
  const bool active_variant = cfg.variant == Variant::amkl || cfg.variant == Variant::amkl_aks;
  if (!active_variant && cfg.active.enabled) {
    throw std::invalid_argument("Engine: active labeling requires an amkl/amkl_aks variant");
  }
  if (cfg.variant == Variant::single_kernel && cfg.dictionary.size() != 1) {
    throw std::invalid_argument("Engine: single_kernel requires a one-kernel dictionary");
  }
  if (cfg.feature_kind == FeatureKind::identity && cfg.dictionary.size() != 1) {
    throw std::invalid_argument("Engine: identity features require a one-kernel dictionary");
  }
}

}  // namespace

Engine::Engine(AlgorithmConfig config, int input_dim)
    : config_(std::move(config)),
      input_dim_(input_dim),
      weights_(make_weight_state(1, 1.0)),
      virtual_weights_(make_weight_state(1, 1.0)),
      collection_rng_(derive_seed(config_.seed, RngStream::collection)),
      subset_rng_(derive_seed(config_.seed, RngStream::subset)) {
  validate_config(config_);
  if (input_dim_ < 1) throw std::invalid_argument("Engine: input_dim must be >= 1");

  const int P = static_cast<int>(config_.dictionary.size());
  models_.resize(P);
  for (int i = 0; i < P; ++i) {
    int feature_dim = input_dim_;
    if (config_.feature_kind == FeatureKind::random_fourier) {
      maps_.emplace_back(config_.dictionary[i], config_.num_features, input_dim_,
                         derive_seed(config_.seed, RngStream::features, i));
      feature_dim = maps_.back().feature_dim();
    }
    models_[i] = LocalModel{Eigen::VectorXd::Zero(feature_dim), i};
  }
  weights_ = make_weight_state(P, config_.eta_g);
  virtual_weights_ = make_weight_state(P, config_.eta_g);
  subset_.resize(P);
  std::iota(subset_.begin(), subset_.end(), 0);
  k_target_ = P;
}

Eigen::VectorXd Engine::featurize(int kernel, const Eigen::VectorXd& x) const {
  if (config_.feature_kind == FeatureKind::identity) return x;
  return maps_[kernel].transform(x);
}

double Engine::predict(const Eigen::VectorXd& x) const {
  const int P = num_kernels();
  Eigen::VectorXd preds(P);
  for (int i = 0; i < P; ++i) preds[i] = streamkl::predict(models_[i], featurize(i, x));
  return combine(preds, restricted_distribution(weights_, subset_), subset_);
}

TraceRecord Engine::step(const Eigen::VectorXd& x, double y) {
  if (x.size() != input_dim_) throw std::invalid_argument("Engine::step: input dimension mismatch");
  const int P = num_kernels();
  ++step_;

  std::vector<Eigen::VectorXd> z(P);
  Eigen::VectorXd preds(P);
  for (int i = 0; i < P; ++i) {
    z[i] = featurize(i, x);
    preds[i] = streamkl::predict(models_[i], z[i]);
  }

  TraceRecord record;
  record.t = step_;
  record.label = y;
  record.k_t = k_target_;
  record.subset = subset_;
  record.prediction = combine(preds, restricted_distribution(weights_, subset_), subset_);
  record.virtual_prediction = distribution(virtual_weights_).p.dot(preds);

  // Labeling decision; the prediction above never sees y.
  bool confident = false;
  if (config_.active.enabled) {
    confident = confidence_check(preds, distribution(weights_), subset_, config_.active.eta_c);
  }
  record.a = decide(history_, confident, config_.active);

  // Per-kernel losses of the pre-update models. The same values feed the
  // learner's weights (labeled steps only) and the virtual shadow (every
  // step).
  const LossSpec weight_loss{config_.regularized_weight_loss ? config_.lambda : 0.0};
  Eigen::VectorXd losses(P);
  for (int i = 0; i < P; ++i) losses[i] = loss(models_[i], z[i], y, weight_loss);

  if (record.a == 1) {
    ++labeled_count_;
    record.kernel_losses.assign(losses.data(), losses.data() + P);

    const LossSpec ogd_loss{config_.lambda};
    for (int i = 0; i < P; ++i) models_[i] = ogd_step(models_[i], z[i], y, config_.eta_l, ogd_loss);
    weights_ = accumulate(weights_, losses, true);

    if (config_.selection_enabled()) {
      k_target_ = choose_K(distribution(weights_), config_.selection.delta);
      const SubsetCollection collection =
          build_collection(P, k_target_, config_.selection, collection_rng_);
      const SubsetPMF pmf = subset_pmf(collection, weights_);
      subset_ = collection.subsets[sample_subset(pmf, subset_rng_)];
    }
  }
  // a_t = 0 freezes models, weights and the subset.

  virtual_weights_ = accumulate(virtual_weights_, losses, true);

  const double err = record.prediction - y;
  squared_error_sum_ += err * err;
  record.running_mse = squared_error_sum_ / static_cast<double>(step_);
  record.running_al_eff = static_cast<double>(labeled_count_) / static_cast<double>(step_);
  return record;
}

Trace Engine::run(std::span<const StreamSample> stream) {
  if (stream.empty()) throw std::invalid_argument("Engine::run: empty stream");
  Trace trace;
  trace.reserve(stream.size());
  for (const auto& sample : stream) trace.push_back(step(sample.x, sample.y));
  return trace;
}

namespace {

json config_to_json(const AlgorithmConfig& cfg) {
  json j;
  j["variant"] = variant_name(cfg.variant);
  j["sigma2"] = json::array();
  for (const auto& kernel : cfg.dictionary) j["sigma2"].push_back(kernel.sigma2);
  j["num_features"] = cfg.num_features;
  j["eta_l"] = cfg.eta_l;
  j["eta_g"] = cfg.eta_g;
  j["lambda"] = cfg.lambda;
  j["delta"] = cfg.selection.delta;
  j["gamma_cap"] = cfg.selection.gamma_cap;
  j["eta_c"] = cfg.active.eta_c;
  j["M"] = cfg.active.M;
  j["active_enabled"] = cfg.active.enabled;
  j["seed"] = cfg.seed;
  j["identity_features"] = cfg.feature_kind == FeatureKind::identity;
  j["regularized_weight_loss"] = cfg.regularized_weight_loss;
  j["budget"] = cfg.budget;
  return j;
}

AlgorithmConfig config_from_json(const json& j) {
  AlgorithmConfig cfg;
  cfg.variant = variant_from_name(j.at("variant").get<std::string>());
  for (double s2 : j.at("sigma2")) cfg.dictionary.push_back({KernelFamily::gaussian, s2});
  cfg.num_features = j.at("num_features").get<int>();
  cfg.eta_l = j.at("eta_l").get<double>();
  cfg.eta_g = j.at("eta_g").get<double>();
  cfg.lambda = j.at("lambda").get<double>();
  cfg.selection.delta = j.at("delta").get<double>();
  cfg.selection.gamma_cap = j.at("gamma_cap").get<double>();
  cfg.active.eta_c = j.at("eta_c").get<double>();
  cfg.active.M = j.at("M").get<int>();
  cfg.active.enabled = j.at("active_enabled").get<bool>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.feature_kind = j.at("identity_features").get<bool>() ? FeatureKind::identity
                                                           : FeatureKind::random_fourier;
  cfg.regularized_weight_loss = j.at("regularized_weight_loss").get<bool>();
  cfg.budget = j.at("budget").get<int>();
  return cfg;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd from_std(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void Engine::save_checkpoint(std::ostream& out) const {
  json j;
  j["format"] = "streamkl-checkpoint";
  j["version"] = 1;
  j["config"] = config_to_json(config_);
  j["input_dim"] = input_dim_;
  j["step"] = step_;
  j["theta"] = json::array();
  for (const auto& model : models_) j["theta"].push_back(to_std(model.theta));
  j["cumulative_loss"] = to_std(weights_.cumulative_loss);
  j["virtual_cumulative_loss"] = to_std(virtual_weights_.cumulative_loss);
  j["subset"] = subset_;
  j["k_target"] = k_target_;
  j["decisions"] = history_.decisions;
  j["consecutive_skips"] = history_.consecutive_skips;
  j["squared_error_sum"] = squared_error_sum_;
  j["labeled_count"] = labeled_count_;
  j["rng_collection"] = collection_rng_.serialize();
  j["rng_subset"] = subset_rng_.serialize();
  out << j.dump(2) << "\n";
}

void Engine::save_checkpoint(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("save_checkpoint: cannot open " + path);
  save_checkpoint(out);
}

Engine Engine::load_checkpoint(std::istream& in) {
  json j;
  in >> j;
  if (j.value("format", "") != "streamkl-checkpoint" || j.value("version", 0) != 1) {
    throw DataError("load_checkpoint: unrecognized checkpoint format");
  }
  Engine engine(config_from_json(j.at("config")), j.at("input_dim").get<int>());
  engine.step_ = j.at("step").get<long>();
  const auto& theta = j.at("theta");
  if (theta.size() != engine.models_.size()) throw DataError("load_checkpoint: model count mismatch");
  for (std::size_t i = 0; i < engine.models_.size(); ++i) {
    engine.models_[i].theta = from_std(theta[i].get<std::vector<double>>());
  }
  engine.weights_.cumulative_loss =
      from_std(j.at("cumulative_loss").get<std::vector<double>>());
  engine.virtual_weights_.cumulative_loss =
      from_std(j.at("virtual_cumulative_loss").get<std::vector<double>>());
  engine.subset_ = j.at("subset").get<std::vector<int>>();
  engine.k_target_ = j.at("k_target").get<int>();
  engine.history_.decisions = j.at("decisions").get<std::vector<std::uint8_t>>();
  engine.history_.consecutive_skips = j.at("consecutive_skips").get<int>();
  engine.squared_error_sum_ = j.at("squared_error_sum").get<double>();
  engine.labeled_count_ = j.at("labeled_count").get<long>();
  engine.collection_rng_ = Rng::deserialize(j.at("rng_collection").get<std::string>());
  engine.subset_rng_ = Rng::deserialize(j.at("rng_subset").get<std::string>());
  return engine;
}

Engine Engine::load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("load_checkpoint: cannot open " + path);
  return load_checkpoint(in);
}

RegretReport compute_regret(const AlgorithmConfig& config,
                            std::span<const StreamSample> stream, const Trace& trace) {
  std::vector<RandomFeatureMap> maps;
  const int d = static_cast<int>(stream.front().x.size());
  for (std::size_t i = 0; i < config.dictionary.size(); ++i) {
    maps.emplace_back(config.dictionary[i], config.num_features, d,
                      derive_seed(config.seed, RngStream::features, i));
  }
  return compute_regret(maps, config.lambda, stream, trace);
}

RegretReport compute_regret(const std::vector<RandomFeatureMap>& maps, double lambda,
                            std::span<const StreamSample> stream, const Trace& trace) {
  if (stream.empty()) throw std::invalid_argument("compute_regret: empty stream");
  if (trace.size() != stream.size()) {
    throw std::invalid_argument("compute_regret: trace does not match the stream");
  }
  const int P = static_cast<int>(maps.size());
  const double T = static_cast<double>(stream.size());

  RegretReport report;
  report.comparator_cumulative_loss.resize(P);

  for (int i = 0; i < P; ++i) {
    const Eigen::Index dim = maps[i].feature_dim();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    double label_sq = 0.0;
    for (const auto& sample : stream) {
      const Eigen::VectorXd z = maps[i].transform(sample.x);
      gram.selfadjointView<Eigen::Lower>().rankUpdate(z);
      rhs += sample.y * z;
      label_sq += sample.y * sample.y;
    }
    gram = gram.selfadjointView<Eigen::Lower>();
    Eigen::MatrixXd regularized = gram;
    regularized.diagonal().array() += lambda * T;
    const Eigen::VectorXd theta = regularized.ldlt().solve(rhs);
    if (!theta.allFinite()) throw NumericError("compute_regret: singular hindsight system");
    // sum_t (y - theta'z)^2 + lambda T |theta|^2
    report.comparator_cumulative_loss[i] = label_sq - 2.0 * theta.dot(rhs) +
                                           theta.dot(gram * theta) +
                                           lambda * T * theta.squaredNorm();
  }

  for (std::size_t t = 0; t < trace.size(); ++t) {
    const double err = trace[t].prediction - stream[t].y;
    report.learner_cumulative_loss += err * err;
  }
  int best = 0;
  report.comparator_cumulative_loss.minCoeff(&best);
  report.best_kernel = best;
  report.regret =
      report.learner_cumulative_loss - report.comparator_cumulative_loss[best];
  return report;
}

}  // namespace streamkl
