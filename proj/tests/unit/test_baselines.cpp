#include <doctest.h>

#include <cmath>

#include "streamkl/baselines.hpp"
#include "streamkl/rng.hpp"

using namespace streamkl;

namespace {
std::vector<StreamSample> nonneg_linear_stream(int T, int dim, std::uint64_t seed) {
  // y = w'x with nonnegative unit-norm w and x, so y lands in [0,1]
  // without any shift the linear model could not express.
  Rng rng(seed);
  Eigen::VectorXd w(dim);
  for (int i = 0; i < dim; ++i) w[i] = std::abs(rng.gaussian());
  w /= w.norm();
  std::vector<StreamSample> stream(T);
  for (int t = 0; t < T; ++t) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = std::abs(rng.gaussian());
    x /= x.norm();
    stream[t] = {x, w.dot(x)};
  }
  return stream;
}
}  // namespace

TEST_CASE("budgeted expansion mechanics") {
  const ExactKernelSpec kernel{ExactKernelSpec::Kind::gaussian, 1.0, 0};
  Rng rng(2);
  const auto random_x = [&](int dim) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = rng.gaussian();
    return Eigen::VectorXd(x / x.norm());
  };

  SUBCASE("B = 1 keeps only the latest point") {
    BudgetedExpansion expansion;
    expansion.budget = 1;
    for (int t = 0; t < 10; ++t) {
      const Eigen::VectorXd x = random_x(4);
      budgeted_kernel_step(expansion, kernel, x, 0.7, 0.1, 0.0);
      REQUIRE(expansion.points.size() == 1);
      CHECK(expansion.points[0] == x);
    }
  }

  SUBCASE("the budget is never exceeded") {
    BudgetedExpansion expansion;
    expansion.budget = 5;
    for (int t = 0; t < 40; ++t) {
      budgeted_kernel_step(expansion, kernel, random_x(4), rng.uniform(), 0.1, 0.01);
      CHECK(expansion.points.size() <= 5);
      CHECK(expansion.points.size() == expansion.coefficients.size());
    }
    CHECK(expansion.points.size() == 5);
  }

  SUBCASE("B >= T matches an untruncated run") {
    BudgetedExpansion big, huge;
    big.budget = 50;
    huge.budget = 1000000;
    for (int t = 0; t < 50; ++t) {
      const Eigen::VectorXd x = random_x(4);
      const double y = rng.uniform();
      budgeted_kernel_step(big, kernel, x, y, 0.1, 0.01);
      budgeted_kernel_step(huge, kernel, x, y, 0.1, 0.01);
    }
    const Eigen::VectorXd probe = random_x(4);
    CHECK(expansion_predict(big, kernel, probe) ==
          doctest::Approx(expansion_predict(huge, kernel, probe)).epsilon(1e-12));
  }
}

TEST_CASE("exact kernel evaluations") {
  Eigen::Vector2d x(1.0, 0.0), xp(0.0, 1.0);
  CHECK(eval_exact_kernel({ExactKernelSpec::Kind::gaussian, 1.0, 0}, x, xp) ==
        doctest::Approx(std::exp(-1.0)));
  CHECK(eval_exact_kernel({ExactKernelSpec::Kind::polynomial, 0.0, 2}, x, x) ==
        doctest::Approx(4.0));  // (1 + 1)^2
  CHECK(eval_exact_kernel({ExactKernelSpec::Kind::polynomial, 0.0, 3}, x, xp) ==
        doctest::Approx(1.0));  // (1 + 0)^3
  CHECK(eval_exact_kernel({ExactKernelSpec::Kind::linear, 0.0, 0}, x, x) == 1.0);
}

TEST_CASE("single_kernel_run mirrors the engine exactly") {
  const auto stream = synthetic_stream(1.0, 0.1, 200, 6, 77);
  const Trace trace = single_kernel_run({KernelFamily::gaussian, 1.0}, 50, stream, 0.05, 0.01, 7);
  REQUIRE(trace.size() == 200);
  for (const auto& record : trace) {
    CHECK(record.a == 1);
    CHECK(record.subset == std::vector<int>{0});
  }
}

TEST_CASE("linear baseline drives MSE toward zero on linearly generated data") {
  const auto stream = nonneg_linear_stream(4000, 10, 5);
  const Trace tuned = linear_run(stream, 0.1, 0.0, 3);
  const double early = tuned[499].running_mse;
  const double late = tuned.back().running_mse;
  CHECK(late < early / 4.0);
  CHECK(late < 1e-3);
}

TEST_CASE("RF single kernel approaches the untruncated kernelized learner as D grows") {
  const auto stream = synthetic_stream(1.0, 0.1, 200, 8, 91);
  const double eta = 0.05;

  const Trace rf = single_kernel_run({KernelFamily::gaussian, 1.0}, 4000, stream, eta, 0.0, 5);
  const Trace exact =
      expansion_run({{ExactKernelSpec::Kind::gaussian, 1.0, 0}}, 200, stream, eta, 1.0, 0.0);

  double worst = 0.0;
  for (std::size_t t = 0; t < stream.size(); ++t) {
    worst = std::max(worst, std::abs(rf[t].prediction - exact[t].prediction));
  }
  CHECK(worst <= 0.05);
}

TEST_CASE("expansion_run validates inputs and emits full-labeling traces") {
  CHECK_THROWS_AS(expansion_run({}, 10, synthetic_stream(1.0, 0.0, 5, 4, 1), 0.1, 1.0, 0.0),
                  std::invalid_argument);

  const auto stream = synthetic_stream(1.0, 0.1, 100, 6, 13);
  std::vector<ExactKernelSpec> kernels;
  for (const auto& spec : standard_dictionary()) {
    kernels.push_back({ExactKernelSpec::Kind::gaussian, spec.sigma2, 0});
  }
  const Trace trace = expansion_run(kernels, 50, stream, 0.1, 0.5, 0.01);
  REQUIRE(trace.size() == 100);
  for (const auto& record : trace) {
    CHECK(record.a == 1);
    CHECK(record.running_al_eff == 1.0);
    CHECK(std::isfinite(record.prediction));
  }
}
