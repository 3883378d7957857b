#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "streamkl/engine.hpp"
#include "streamkl/kernels.hpp"

namespace streamkl {

// Kernels evaluated exactly (no random features) for the expansion-based
// baselines. Polynomial kernels are not shift-invariant, so they only
// exist here.
struct ExactKernelSpec {
  enum class Kind { gaussian, polynomial, linear } kind = Kind::gaussian;
  double sigma2 = 1.0;  // gaussian
  int degree = 2;       // polynomial: (1 + x'x)^degree
};

double eval_exact_kernel(const ExactKernelSpec& kernel, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& xp);

// Truncated kernel expansion f(x) = sum_m alpha_m kappa(x, u_m) holding at
// most `budget` support points; the oldest point is evicted first.
struct BudgetedExpansion {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> coefficients;
  int budget = 50;
};

double expansion_predict(const BudgetedExpansion& expansion, const ExactKernelSpec& kernel,
                         const Eigen::VectorXd& x);

// Functional OGD step on the regularized squared loss: shrink existing
// coefficients by (1 - 2 eta lambda), append -2 eta (f(x) - y) at x, evict
// beyond the budget.
void budgeted_kernel_step(BudgetedExpansion& expansion, const ExactKernelSpec& kernel,
                          const Eigen::VectorXd& x, double y, double eta_l, double lambda);

// Multi-kernel expansion learner: per-kernel budgeted expansions combined
// with EXP weights over the squared prediction errors. The non-RF OMKL
// comparison point runs this with a large budget, OMKL-B with a small one.
Trace expansion_run(const std::vector<ExactKernelSpec>& kernels, int budget,
                    std::span<const StreamSample> stream, double eta_l, double eta_g,
                    double lambda);

// Single RF kernel learner; a thin wrapper over the engine with P = 1, so
// traces are bit-identical to the engine's.
Trace single_kernel_run(const KernelSpec& kernel, int num_features,
                        std::span<const StreamSample> stream, double eta_l, double lambda,
                        std::uint64_t seed);

// Linear model over the raw (unit-norm) inputs via identity features.
Trace linear_run(std::span<const StreamSample> stream, double eta_l, double lambda,
                 std::uint64_t seed);

}  // namespace streamkl
