#include "streamkl/baselines.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace streamkl {

double eval_exact_kernel(const ExactKernelSpec& kernel, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& xp) {
  if (x.size() != xp.size()) throw std::invalid_argument("eval_exact_kernel: dimension mismatch");
  switch (kernel.kind) {
    case ExactKernelSpec::Kind::gaussian:
      return std::exp(-(x - xp).squaredNorm() / (2.0 * kernel.sigma2));
    case ExactKernelSpec::Kind::polynomial:
      return std::pow(1.0 + x.dot(xp), kernel.degree);
    case ExactKernelSpec::Kind::linear:
      return x.dot(xp);
  }
  throw std::invalid_argument("eval_exact_kernel: unknown kind");
}

double expansion_predict(const BudgetedExpansion& expansion, const ExactKernelSpec& kernel,
                         const Eigen::VectorXd& x) {
  double value = 0.0;
  for (std::size_t m = 0; m < expansion.points.size(); ++m) {
    value += expansion.coefficients[m] * eval_exact_kernel(kernel, x, expansion.points[m]);
  }
  return value;
}

void budgeted_kernel_step(BudgetedExpansion& expansion, const ExactKernelSpec& kernel,
                          const Eigen::VectorXd& x, double y, double eta_l, double lambda) {
  if (expansion.budget < 1) throw std::invalid_argument("budgeted_kernel_step: budget must be >= 1");
  const double residual = expansion_predict(expansion, kernel, x) - y;
  if (lambda > 0.0) {
    const double shrink = 1.0 - 2.0 * eta_l * lambda;
    for (double& alpha : expansion.coefficients) alpha *= shrink;
  }
  expansion.points.push_back(x);
  expansion.coefficients.push_back(-2.0 * eta_l * residual);
  if (static_cast<int>(expansion.points.size()) > expansion.budget) {
    expansion.points.erase(expansion.points.begin());
    expansion.coefficients.erase(expansion.coefficients.begin());
  }
}

Trace expansion_run(const std::vector<ExactKernelSpec>& kernels, int budget,
                    std::span<const StreamSample> stream, double eta_l, double eta_g,
                    double lambda) {
  if (kernels.empty()) throw std::invalid_argument("expansion_run: empty kernel list");
  if (stream.empty()) throw std::invalid_argument("expansion_run: empty stream");

  const int P = static_cast<int>(kernels.size());
  std::vector<BudgetedExpansion> expansions(P);
  for (auto& e : expansions) e.budget = budget;
  WeightState weights = make_weight_state(P, eta_g);
  std::vector<int> all(P);
  std::iota(all.begin(), all.end(), 0);

  Trace trace;
  trace.reserve(stream.size());
  double squared_error_sum = 0.0;
  long t = 0;

  for (const auto& sample : stream) {
    ++t;
    Eigen::VectorXd preds(P);
    for (int i = 0; i < P; ++i) preds[i] = expansion_predict(expansions[i], kernels[i], sample.x);

    TraceRecord record;
    record.t = t;
    record.label = sample.y;
    record.a = 1;
    record.k_t = P;
    record.subset = all;
    record.prediction = combine(preds, distribution(weights), all);

    Eigen::VectorXd losses(P);
    for (int i = 0; i < P; ++i) {
      const double err = preds[i] - sample.y;
      losses[i] = err * err;
    }
    for (int i = 0; i < P; ++i) {
      budgeted_kernel_step(expansions[i], kernels[i], sample.x, sample.y, eta_l, lambda);
    }
    weights = accumulate(weights, losses, true);
    record.kernel_losses.assign(losses.data(), losses.data() + P);

    const double err = record.prediction - sample.y;
    squared_error_sum += err * err;
    record.running_mse = squared_error_sum / static_cast<double>(t);
    record.running_al_eff = 1.0;
    trace.push_back(std::move(record));
  }
  return trace;
}

Trace single_kernel_run(const KernelSpec& kernel, int num_features,
                        std::span<const StreamSample> stream, double eta_l, double lambda,
                        std::uint64_t seed) {
  if (stream.empty()) throw std::invalid_argument("single_kernel_run: empty stream");
  AlgorithmConfig cfg;
  cfg.variant = Variant::single_kernel;
  cfg.dictionary = {kernel};
  cfg.num_features = num_features;
  cfg.eta_l = eta_l;
  cfg.eta_g = 1.0;  // immaterial with one kernel
  cfg.lambda = lambda;
  cfg.seed = seed;
  Engine engine(cfg, static_cast<int>(stream.front().x.size()));
  return engine.run(stream);
}

Trace linear_run(std::span<const StreamSample> stream, double eta_l, double lambda,
                 std::uint64_t seed) {
  if (stream.empty()) throw std::invalid_argument("linear_run: empty stream");
  AlgorithmConfig cfg;
  cfg.variant = Variant::single_kernel;
  cfg.dictionary = {KernelSpec{}};
  cfg.feature_kind = FeatureKind::identity;
  cfg.eta_l = eta_l;
  cfg.eta_g = 1.0;
  cfg.lambda = lambda;
  cfg.seed = seed;
  Engine engine(cfg, static_cast<int>(stream.front().x.size()));
  return engine.run(stream);
}

}  // namespace streamkl
