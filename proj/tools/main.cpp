#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "streamkl/errors.hpp"
#include "streamkl/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace streamkl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitDataError = 2;

struct CliOptions {
  std::string config_file;
  std::string method = "raker";
  std::string data_manifest;
  bool use_synthetic = false;
  double gen_sigma2 = 1.0;
  double noise_std = 0.0;
  long synthetic_T = 5000;
  int synthetic_dim = 10;
  int synthetic_centers = 32;
  bool synthetic_skewed = false;
  std::vector<double> dictionary;
  int num_features = 50;
  double eta_l = 0.0;
  double eta_g = 0.0;
  double lambda = 0.01;
  double delta = 0.8;
  double gamma_cap = 2.0;
  double eta_c = 5e-4;
  int M = 1;
  std::uint64_t seed = 1;
  double rbf_sigma2 = 1.0;
  int budget = 50;
  std::string out_dir;
  bool emit_trace = false;
  bool emit_plot = false;
  bool with_regret = false;
};

// Values from --config seed the defaults; explicit flags override them.
void apply_config_file(CliOptions& opt) {
  if (opt.config_file.empty()) return;
  std::ifstream in(opt.config_file);
  if (!in) throw std::invalid_argument("cannot open config file " + opt.config_file);
  json j;
  in >> j;
  if (j.contains("method")) opt.method = j["method"].get<std::string>();
  if (j.contains("data")) opt.data_manifest = j["data"].get<std::string>();
  if (j.contains("synthetic")) opt.use_synthetic = j["synthetic"].get<bool>();
  if (j.contains("gen_sigma2")) opt.gen_sigma2 = j["gen_sigma2"].get<double>();
  if (j.contains("noise_std")) opt.noise_std = j["noise_std"].get<double>();
  if (j.contains("T")) opt.synthetic_T = j["T"].get<long>();
  if (j.contains("dim")) opt.synthetic_dim = j["dim"].get<int>();
  if (j.contains("centers")) opt.synthetic_centers = j["centers"].get<int>();
  if (j.contains("skewed")) opt.synthetic_skewed = j["skewed"].get<bool>();
  if (j.contains("dictionary")) opt.dictionary = j["dictionary"].get<std::vector<double>>();
  if (j.contains("D")) opt.num_features = j["D"].get<int>();
  if (j.contains("eta_l")) opt.eta_l = j["eta_l"].get<double>();
  if (j.contains("eta_g")) opt.eta_g = j["eta_g"].get<double>();
  if (j.contains("lambda")) opt.lambda = j["lambda"].get<double>();
  if (j.contains("delta")) opt.delta = j["delta"].get<double>();
  if (j.contains("gamma_cap")) opt.gamma_cap = j["gamma_cap"].get<double>();
  if (j.contains("eta_c")) opt.eta_c = j["eta_c"].get<double>();
  if (j.contains("M")) opt.M = j["M"].get<int>();
  if (j.contains("seed")) opt.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("rbf_sigma2")) opt.rbf_sigma2 = j["rbf_sigma2"].get<double>();
  if (j.contains("budget")) opt.budget = j["budget"].get<int>();
  if (j.contains("out")) opt.out_dir = j["out"].get<std::string>();
}

RunConfig to_run_config(const CliOptions& opt) {
  if (opt.data_manifest.empty() && !opt.use_synthetic) {
    throw std::invalid_argument("no data source: pass --data <manifest> or --synthetic");
  }
  if (!opt.data_manifest.empty() && opt.use_synthetic) {
    throw std::invalid_argument("--data and --synthetic are mutually exclusive");
  }
  RunConfig config;
  config.method = method_from_name(opt.method);
  config.manifest_path = opt.data_manifest;
  if (opt.use_synthetic) {
    config.synthetic = SyntheticSpec{opt.gen_sigma2, opt.noise_std, opt.synthetic_T,
                                     opt.synthetic_dim, opt.synthetic_centers,
                                     opt.synthetic_skewed};
  }
  config.dictionary_sigma2 = opt.dictionary;
  config.num_features = opt.num_features;
  config.eta_l = opt.eta_l;
  config.eta_g = opt.eta_g;
  config.lambda = opt.lambda;
  config.delta = opt.delta;
  config.gamma_cap = opt.gamma_cap;
  config.eta_c = opt.eta_c;
  config.M = opt.M;
  config.seed = opt.seed;
  config.rbf_sigma2 = opt.rbf_sigma2;
  config.budget = opt.budget;
  config.out_dir = opt.out_dir;
  config.emit_trace = opt.emit_trace;
  config.emit_plot_data = opt.emit_plot;
  config.with_regret = opt.with_regret;
  return config;
}

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--config", opt.config_file, "JSON config file; flags override its values");
  cmd->add_option("--data", opt.data_manifest, "dataset manifest path");
  cmd->add_flag("--synthetic", opt.use_synthetic, "use the synthetic stream generator");
  cmd->add_option("--gen-sigma2", opt.gen_sigma2, "synthetic generating kernel bandwidth");
  cmd->add_option("--noise", opt.noise_std, "synthetic label noise std");
  cmd->add_option("--T", opt.synthetic_T, "synthetic stream length");
  cmd->add_option("--dim", opt.synthetic_dim, "synthetic input dimension");
  cmd->add_option("--centers", opt.synthetic_centers, "synthetic expansion size");
  cmd->add_flag("--skewed", opt.synthetic_skewed, "skewed synthetic labels (mass near zero)");
  cmd->add_option("--dictionary", opt.dictionary,
                  "kernel bandwidths sigma2 (default: 17-kernel grid 10^{(i-8)/2})");
  cmd->add_option("--D", opt.num_features, "random features per kernel");
  cmd->add_option("--eta-l", opt.eta_l, "local step size (0 = 1/sqrt(T))");
  cmd->add_option("--eta-g", opt.eta_g, "weight learning rate (0 = 1/sqrt(T))");
  cmd->add_option("--lambda", opt.lambda, "ridge regularizer");
  cmd->add_option("--delta", opt.delta, "subset-size threshold");
  cmd->add_option("--gamma-cap", opt.gamma_cap, "collection size factor");
  cmd->add_option("--eta-c", opt.eta_c, "confidence threshold");
  cmd->add_option("--M", opt.M, "max consecutive unlabeled samples");
  cmd->add_option("--seed", opt.seed, "master seed");
  cmd->add_option("--rbf-sigma2", opt.rbf_sigma2, "bandwidth for kl_rbf");
  cmd->add_option("--budget", opt.budget, "support budget for omkl_b");
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_flag("--emit-trace", opt.emit_trace, "write trace.csv");
  cmd->add_flag("--emit-plot", opt.emit_plot, "write plot-ready curves and a gnuplot script");
  cmd->add_flag("--with-regret", opt.with_regret, "compute the hindsight regret (slow)");
}

void print_summary(const MetricsSummary& summary) {
  std::cout << "method      : " << summary.method << "\n"
            << "dataset     : " << summary.dataset << "\n"
            << "steps       : " << summary.steps << "\n"
            << "labeled     : " << summary.labeled << "\n"
            << "final MSE   : " << summary.final_mse << "  (x1e-3: " << summary.final_mse * 1e3
            << ")\n"
            << "AL_eff      : " << summary.final_al_eff << "\n"
            << "eta_l/eta_g : " << summary.eta_l << " / " << summary.eta_g << "\n"
            << "seed        : " << summary.seed << "\n";
  if (summary.regret) {
    std::cout << "regret      : " << summary.regret->regret << "\n"
              << "best kernel : " << summary.regret->best_kernel << " (hindsight)\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streamkl: streaming multiple-kernel learning benchmark"};
  app.require_subcommand(1);

  CliOptions run_opt, compare_opt, sweep_opt;
  std::string compare_methods = "raker,omkl_aks,amkl_aks";
  std::string sweep_grid = "5e-5,5e-4,5e-3";
  std::string sweep_seeds = "1,2,3";

  auto* run_cmd = app.add_subcommand("run", "run one experiment");
  add_common_flags(run_cmd, run_opt);
  run_cmd->add_option("--variant", run_opt.method,
                      "raker|omkl_aks|amkl|amkl_aks|kl_rbf|linear|poly2|poly3|omkl|omkl_b");

  auto* compare_cmd = app.add_subcommand("compare", "run several variants on one dataset");
  add_common_flags(compare_cmd, compare_opt);
  compare_cmd->add_option("--variants", compare_methods, "comma-separated method list");

  auto* sweep_cmd = app.add_subcommand("sweep", "eta_c accuracy-efficiency tradeoff");
  add_common_flags(sweep_cmd, sweep_opt);
  sweep_cmd->add_option("--variant", sweep_opt.method, "method to sweep (default amkl_aks)");
  sweep_cmd->add_option("--eta-c-grid", sweep_grid, "comma-separated eta_c values");
  sweep_cmd->add_option("--seeds", sweep_seeds, "comma-separated seeds to average over");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  const auto split_doubles = [](const std::string& text) {
    std::vector<double> values;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
      if (!token.empty()) values.push_back(std::stod(token));
    }
    return values;
  };

  try {
    if (run_cmd->parsed()) {
      apply_config_file(run_opt);
      const auto summary = run_experiment(to_run_config(run_opt));
      print_summary(summary);
    } else if (compare_cmd->parsed()) {
      apply_config_file(compare_opt);
      std::vector<RunConfig> configs;
      std::istringstream in(compare_methods);
      std::string token;
      while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        CliOptions opt = compare_opt;
        opt.method = token;
        configs.push_back(to_run_config(opt));
      }
      const auto table = compare(configs);
      std::cout << table.text;
      if (!compare_opt.out_dir.empty()) {
        fs::create_directories(compare_opt.out_dir);
        std::ofstream txt(fs::path(compare_opt.out_dir) / "comparison.txt");
        txt << table.text;
        std::ofstream csv(fs::path(compare_opt.out_dir) / "comparison.csv");
        csv << "method,final_mse,al_eff\n";
        for (const auto& row : table.rows) {
          csv << row.method << ',' << row.final_mse << ',' << row.final_al_eff << "\n";
        }
      }
    } else if (sweep_cmd->parsed()) {
      apply_config_file(sweep_opt);
      if (sweep_opt.method == "raker") sweep_opt.method = "amkl_aks";
      const auto grid = split_doubles(sweep_grid);
      std::vector<std::uint64_t> seeds;
      for (double s : split_doubles(sweep_seeds)) seeds.push_back(static_cast<std::uint64_t>(s));
      const auto points = sweep_eta_c(to_run_config(sweep_opt), grid, seeds);
      std::cout << "eta_c,mean_mse,mean_al_eff\n";
      std::ostringstream csv;
      csv << "eta_c,mean_mse,mean_al_eff\n";
      for (const auto& point : points) {
        std::cout << point.eta_c << ',' << point.mean_mse << ',' << point.mean_al_eff << "\n";
        csv << point.eta_c << ',' << point.mean_mse << ',' << point.mean_al_eff << "\n";
      }
      if (!sweep_opt.out_dir.empty()) {
        fs::create_directories(sweep_opt.out_dir);
        std::ofstream out(fs::path(sweep_opt.out_dir) / "sweep.csv");
        out << csv.str();
      }
    }
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitOk;
}
