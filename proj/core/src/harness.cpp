#include "streamkl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "streamkl/baselines.hpp"
#include "streamkl/errors.hpp"

namespace streamkl {

using nlohmann::json;
namespace fs = std::filesystem;

std::string method_name(Method method) {
  switch (method) {
    case Method::raker: return "raker";
    case Method::omkl_aks: return "omkl_aks";
    case Method::amkl: return "amkl";
    case Method::amkl_aks: return "amkl_aks";
    case Method::kl_rbf: return "kl_rbf";
    case Method::linear: return "linear";
    case Method::poly2: return "poly2";
    case Method::poly3: return "poly3";
    case Method::omkl: return "omkl";
    case Method::omkl_b: return "omkl_b";
  }
  throw std::invalid_argument("method_name: unknown method");
}

Method method_from_name(const std::string& name) {
  for (Method m : {Method::raker, Method::omkl_aks, Method::amkl, Method::amkl_aks,
                   Method::kl_rbf, Method::linear, Method::poly2, Method::poly3,
                   Method::omkl, Method::omkl_b}) {
    if (method_name(m) == name) return m;
  }
  throw std::invalid_argument("method_from_name: unknown method '" + name + "'");
}

namespace {

std::vector<KernelSpec> resolve_dictionary(const RunConfig& config) {
  if (config.dictionary_sigma2.empty()) return standard_dictionary();
  std::vector<KernelSpec> dict;
  for (double s2 : config.dictionary_sigma2) dict.push_back({KernelFamily::gaussian, s2});
  return dict;
}

bool is_engine_method(Method method) {
  switch (method) {
    case Method::raker:
    case Method::omkl_aks:
    case Method::amkl:
    case Method::amkl_aks:
    case Method::kl_rbf:
    case Method::linear:
      return true;
    default:
      return false;
  }
}

AlgorithmConfig build_engine_config(const RunConfig& config, double eta_l, double eta_g) {
  AlgorithmConfig algo;
  algo.num_features = config.num_features;
  algo.eta_l = eta_l;
  algo.eta_g = eta_g;
  algo.lambda = config.lambda;
  algo.selection.delta = config.delta;
  algo.selection.gamma_cap = config.gamma_cap;
  algo.active.eta_c = config.eta_c;
  algo.active.M = config.M;
  algo.seed = config.seed;
  algo.regularized_weight_loss = config.regularized_weight_loss;

  switch (config.method) {
    case Method::raker:
      algo.variant = Variant::raker;
      algo.dictionary = resolve_dictionary(config);
      break;
    case Method::omkl_aks:
      algo.variant = Variant::omkl_aks;
      algo.dictionary = resolve_dictionary(config);
      break;
    case Method::amkl:
      algo.variant = Variant::amkl;
      algo.dictionary = resolve_dictionary(config);
      algo.active.enabled = true;
      break;
    case Method::amkl_aks:
      algo.variant = Variant::amkl_aks;
      algo.dictionary = resolve_dictionary(config);
      algo.active.enabled = true;
      break;
    case Method::kl_rbf:
      algo.variant = Variant::single_kernel;
      algo.dictionary = {KernelSpec{KernelFamily::gaussian, config.rbf_sigma2}};
      break;
    case Method::linear:
      algo.variant = Variant::single_kernel;
      algo.dictionary = {KernelSpec{}};
      algo.feature_kind = FeatureKind::identity;
      break;
    default:
      throw std::invalid_argument("build_engine_config: not an engine method");
  }
  return algo;
}

std::string join_subset(const std::vector<int>& subset) {
  std::string out;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(subset[i]);
  }
  return out;
}

void write_plot_data(const std::string& dir, const Trace& trace) {
  const auto write_curve = [&](const std::string& file, auto getter) {
    std::ofstream out(fs::path(dir) / file);
    for (const auto& r : trace) out << r.t << " " << getter(r) << "\n";
  };
  write_curve("mse_curve.dat", [](const TraceRecord& r) { return r.running_mse; });
  write_curve("aleff_curve.dat", [](const TraceRecord& r) { return r.running_al_eff; });
  write_curve("k_curve.dat", [](const TraceRecord& r) { return r.k_t; });

  std::ofstream gp(fs::path(dir) / "plot.gp");
  gp << "# gnuplot script for the emitted curves\n"
     << "set terminal pngcairo size 900,600\n"
     << "set logscale y\n"
     << "set xlabel 't'\n"
     << "set output 'mse.png'\n"
     << "plot 'mse_curve.dat' with lines title 'MSE(t)'\n"
     << "unset logscale y\n"
     << "set output 'aleff.png'\n"
     << "plot 'aleff_curve.dat' with lines title 'AL efficiency(t)'\n"
     << "set output 'k.png'\n"
     << "plot 'k_curve.dat' with lines title 'K_t'\n";
}

void write_summary_json(const std::string& dir, const MetricsSummary& summary) {
  json j;
  j["method"] = summary.method;
  j["dataset"] = summary.dataset;
  j["steps"] = summary.steps;
  j["labeled"] = summary.labeled;
  j["final_mse"] = summary.final_mse;
  j["final_al_eff"] = summary.final_al_eff;
  j["eta_l"] = summary.eta_l;
  j["eta_g"] = summary.eta_g;
  j["seed"] = summary.seed;
  if (!summary.content_hash.empty()) j["content_hash"] = summary.content_hash;
  if (summary.regret) {
    j["regret"] = summary.regret->regret;
    j["best_hindsight_kernel"] = summary.regret->best_kernel;
  }
  std::ofstream out(fs::path(dir) / "summary.json");
  out << j.dump(2) << "\n";
}

}  // namespace

void write_trace_csv(const std::string& path, const Trace& trace) {
  std::ofstream out(path);
  if (!out) throw DataError("write_trace_csv: cannot open " + path);
  out << "# streamkl trace v1\n";
  out << "t,yhat,y,a,K,subset,mse,al_eff\n";
  out << std::setprecision(17);
  for (const auto& r : trace) {
    out << r.t << ',' << r.prediction << ',' << r.label << ',' << r.a << ',' << r.k_t << ','
        << join_subset(r.subset) << ',' << r.running_mse << ',' << r.running_al_eff << "\n";
  }
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("read_trace_csv: cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("# streamkl trace v", 0) != 0) {
    throw DataError("read_trace_csv: missing version header in " + path);
  }
  std::getline(in, line);  // column names
  Trace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    TraceRecord r;
    std::getline(row, field, ',');
    r.t = std::stol(field);
    std::getline(row, field, ',');
    r.prediction = std::stod(field);
    std::getline(row, field, ',');
    r.label = std::stod(field);
    std::getline(row, field, ',');
    r.a = std::stoi(field);
    std::getline(row, field, ',');
    r.k_t = std::stoi(field);
    std::getline(row, field, ',');
    {
      std::istringstream subset(field);
      std::string idx;
      while (std::getline(subset, idx, ';')) {
        if (!idx.empty()) r.subset.push_back(std::stoi(idx));
      }
    }
    std::getline(row, field, ',');
    r.running_mse = std::stod(field);
    std::getline(row, field, ',');
    r.running_al_eff = std::stod(field);
    trace.push_back(std::move(r));
  }
  return trace;
}

MetricsSummary run_experiment_on(const RunConfig& config,
                                 std::span<const StreamSample> stream,
                                 const std::string& dataset_label,
                                 const std::string& content_hash) {
  if (stream.empty()) throw DataError("run_experiment: empty stream");
  const double T = static_cast<double>(stream.size());
  const double eta_l = config.eta_l > 0.0 ? config.eta_l : 1.0 / std::sqrt(T);
  const double eta_g = config.eta_g > 0.0 ? config.eta_g : 1.0 / std::sqrt(T);

  Trace trace;
  std::optional<AlgorithmConfig> engine_config;
  if (is_engine_method(config.method)) {
    engine_config = build_engine_config(config, eta_l, eta_g);
    Engine engine(*engine_config, static_cast<int>(stream.front().x.size()));
    trace = engine.run(stream);
  } else {
    switch (config.method) {
      case Method::poly2:
      case Method::poly3: {
        ExactKernelSpec kernel;
        kernel.kind = ExactKernelSpec::Kind::polynomial;
        kernel.degree = config.method == Method::poly2 ? 2 : 3;
        trace = expansion_run({kernel}, config.full_budget_cap, stream, eta_l, eta_g,
                              config.lambda);
        break;
      }
      case Method::omkl:
      case Method::omkl_b: {
        std::vector<ExactKernelSpec> kernels;
        for (const auto& spec : resolve_dictionary(config)) {
          kernels.push_back({ExactKernelSpec::Kind::gaussian, spec.sigma2, 0});
        }
        const int budget =
            config.method == Method::omkl ? config.full_budget_cap : config.budget;
        trace = expansion_run(kernels, budget, stream, eta_l, eta_g, config.lambda);
        break;
      }
      default:
        throw std::invalid_argument("run_experiment: unhandled method");
    }
  }

  MetricsSummary summary;
  summary.method = method_name(config.method);
  summary.dataset = dataset_label;
  summary.content_hash = content_hash;
  summary.steps = static_cast<long>(trace.size());
  summary.labeled = 0;
  for (const auto& r : trace) summary.labeled += r.a;
  summary.final_mse = trace.back().running_mse;
  summary.final_al_eff = trace.back().running_al_eff;
  summary.eta_l = eta_l;
  summary.eta_g = eta_g;
  summary.seed = config.seed;
  summary.mse_curve.reserve(trace.size());
  summary.k_curve.reserve(trace.size());
  for (const auto& r : trace) {
    summary.mse_curve.push_back(r.running_mse);
    summary.k_curve.push_back(r.k_t);
  }
  if (config.with_regret && engine_config) {
    summary.regret = compute_regret(*engine_config, stream, trace);
  }

  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    if (config.emit_trace) {
      write_trace_csv((fs::path(config.out_dir) / "trace.csv").string(), trace);
    }
    if (config.emit_summary) write_summary_json(config.out_dir, summary);
    if (config.emit_plot_data) write_plot_data(config.out_dir, trace);
  }
  return summary;
}

namespace {

std::pair<std::vector<StreamSample>, std::pair<std::string, std::string>> load_stream(
    const RunConfig& config) {
  if (!config.manifest_path.empty() && config.synthetic) {
    throw std::invalid_argument("run_experiment: choose either a manifest or a synthetic stream");
  }
  if (!config.manifest_path.empty()) {
    const DatasetManifest manifest = load_manifest(config.manifest_path);
    LoadReport report = load_csv(manifest);
    return {std::move(report.samples), {manifest.name, report.content_hash}};
  }
  if (config.synthetic) {
    const auto& s = *config.synthetic;
    std::ostringstream label;
    label << "synthetic(sigma2=" << s.generating_sigma2 << ",noise=" << s.noise_std
          << ",T=" << s.T << ",d=" << s.dim << (s.nonnegative ? ",skewed" : "") << ")";
    return {synthetic_stream(s.generating_sigma2, s.noise_std, s.T, s.dim, config.seed,
                             s.centers, s.nonnegative),
            {label.str(), ""}};
  }
  throw std::invalid_argument("run_experiment: no data source configured");
}

}  // namespace

MetricsSummary run_experiment(const RunConfig& config) {
  auto [stream, labels] = load_stream(config);
  return run_experiment_on(config, stream, labels.first, labels.second);
}

ComparisonTable compare(const std::vector<RunConfig>& configs) {
  if (configs.size() < 2) throw std::invalid_argument("compare: need at least two configs");
  for (std::size_t i = 1; i < configs.size(); ++i) {
    const bool same_manifest = configs[i].manifest_path == configs[0].manifest_path;
    const bool same_synth =
        configs[i].synthetic.has_value() == configs[0].synthetic.has_value() &&
        (!configs[i].synthetic ||
         (configs[i].synthetic->generating_sigma2 == configs[0].synthetic->generating_sigma2 &&
          configs[i].synthetic->noise_std == configs[0].synthetic->noise_std &&
          configs[i].synthetic->T == configs[0].synthetic->T &&
          configs[i].synthetic->dim == configs[0].synthetic->dim &&
          configs[i].synthetic->centers == configs[0].synthetic->centers &&
          configs[i].synthetic->nonnegative == configs[0].synthetic->nonnegative));
    if (!same_manifest || !same_synth) {
      throw std::invalid_argument("compare: configs must share the data source");
    }
  }

  auto [stream, labels] = load_stream(configs[0]);
  ComparisonTable table;
  table.dataset = labels.first;
  for (const auto& config : configs) {
    RunConfig quiet = config;
    quiet.out_dir.clear();
    const MetricsSummary summary = run_experiment_on(quiet, stream, labels.first, labels.second);
    table.rows.push_back({summary.method, summary.final_mse, summary.final_al_eff});
  }

  std::ostringstream text;
  text << "dataset: " << table.dataset << "\n";
  text << std::left << std::setw(12) << "method" << std::right << std::setw(14)
       << "MSE(x1e-3)" << std::setw(10) << "AL_eff" << "\n";
  for (const auto& row : table.rows) {
    text << std::left << std::setw(12) << row.method << std::right << std::setw(14)
         << std::fixed << std::setprecision(3) << row.final_mse * 1e3 << std::setw(10)
         << std::setprecision(3) << row.final_al_eff << "\n";
  }
  table.text = text.str();
  return table;
}

std::vector<SweepPoint> sweep_eta_c(const RunConfig& base, const std::vector<double>& grid,
                                    const std::vector<std::uint64_t>& seeds) {
  if (grid.empty()) throw std::invalid_argument("sweep_eta_c: empty grid");
  if (seeds.empty()) throw std::invalid_argument("sweep_eta_c: empty seed list");

  std::vector<SweepPoint> points;
  for (double eta_c : grid) {
    SweepPoint point;
    point.eta_c = eta_c;
    for (std::uint64_t seed : seeds) {
      RunConfig config = base;
      config.eta_c = eta_c;
      config.seed = seed;
      config.out_dir.clear();
      const MetricsSummary summary = run_experiment(config);
      point.mean_mse += summary.final_mse;
      point.mean_al_eff += summary.final_al_eff;
    }
    point.mean_mse /= static_cast<double>(seeds.size());
    point.mean_al_eff /= static_cast<double>(seeds.size());
    points.push_back(point);
  }
  return points;
}

}  // namespace streamkl
