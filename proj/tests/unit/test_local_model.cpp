#include <doctest.h>

#include <cmath>

#include "streamkl/errors.hpp"
#include "streamkl/local_model.hpp"
#include "streamkl/random_features.hpp"
#include "streamkl/rng.hpp"

using namespace streamkl;

namespace {

Eigen::VectorXd random_vec(Rng& rng, int dim, double scale = 1.0) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = scale * rng.gaussian();
  return v;
}

Eigen::VectorXd unit_feature(Rng& rng, const RandomFeatureMap& map) {
  return map.transform(random_vec(rng, map.input_dim()));
}

}  // namespace

TEST_CASE("predict basics") {
  const auto map = sample_frequencies({KernelFamily::gaussian, 1.0}, 10, 4, 1);
  Rng rng(2);
  const Eigen::VectorXd z = unit_feature(rng, map);

  CHECK(predict(LocalModel{Eigen::VectorXd::Zero(20), 0}, z) == 0.0);
  CHECK(predict(LocalModel{z, 0}, z) == doctest::Approx(1.0).epsilon(1e-12));

  const LocalModel theta{random_vec(rng, 20), 0};
  const LocalModel scaled{2.5 * theta.theta, 0};
  CHECK(predict(scaled, z) == doctest::Approx(2.5 * predict(theta, z)));

  CHECK_THROWS_AS(predict(theta, Eigen::VectorXd::Zero(19)), std::invalid_argument);
}

TEST_CASE("loss plug-ins") {
  const auto map = sample_frequencies({KernelFamily::gaussian, 1.0}, 10, 4, 1);
  Rng rng(3);
  const Eigen::VectorXd z = unit_feature(rng, map);
  const LocalModel zero{Eigen::VectorXd::Zero(20), 0};

  CHECK(loss(zero, z, 0.5, LossSpec{0.0}) == doctest::Approx(0.25));
  CHECK(loss(zero, z, 0.0, LossSpec{123.0}) == 0.0);

  // Perfect fit with |theta|^2 = 4: only the regularizer remains.
  Eigen::VectorXd theta = 2.0 * z;  // |z| = 1 so |theta|^2 = 4
  const LocalModel fit{theta, 0};
  CHECK(loss(fit, z, predict(fit, z), LossSpec{0.01}) == doctest::Approx(0.04).epsilon(1e-9));
}

TEST_CASE("gradient matches plug-ins and finite differences") {
  Rng rng(5);
  const LossSpec spec{0.0};
  const Eigen::VectorXd z = random_vec(rng, 12);
  CHECK((gradient(LocalModel{Eigen::VectorXd::Zero(12), 0}, z, 0.7, spec) + 1.4 * z).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Central-difference oracle: 50 random instances, relative error <= 1e-5.
  const double h = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd theta = random_vec(rng, 12);
    const Eigen::VectorXd zz = random_vec(rng, 12);
    const double y = rng.gaussian();
    const LossSpec s{trial % 2 == 0 ? 0.0 : 0.05};
    const Eigen::VectorXd analytic = gradient(LocalModel{theta, 0}, zz, y, s);
    Eigen::VectorXd numeric(12);
    for (int k = 0; k < 12; ++k) {
      Eigen::VectorXd up = theta, down = theta;
      up[k] += h;
      down[k] -= h;
      numeric[k] =
          (loss(LocalModel{up, 0}, zz, y, s) - loss(LocalModel{down, 0}, zz, y, s)) / (2.0 * h);
    }
    CHECK((analytic - numeric).norm() <= 1e-5 * std::max(1.0, analytic.norm()));
  }

  // Zero residual, zero lambda: zero gradient.
  const Eigen::VectorXd theta = random_vec(rng, 12);
  CHECK(gradient(LocalModel{theta, 0}, z, theta.dot(z), spec).norm() ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("loss is convex in theta") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd z = random_vec(rng, 9);
    const double y = rng.gaussian();
    const LossSpec spec{0.01};
    const Eigen::VectorXd t1 = random_vec(rng, 9, 2.0);
    const Eigen::VectorXd t2 = random_vec(rng, 9, 2.0);
    const double mid = loss(LocalModel{0.5 * (t1 + t2), 0}, z, y, spec);
    const double hull =
        0.5 * loss(LocalModel{t1, 0}, z, y, spec) + 0.5 * loss(LocalModel{t2, 0}, z, y, spec);
    CHECK(mid <= hull + 1e-12);
  }
}

TEST_CASE("ogd_step algebra") {
  const auto map = sample_frequencies({KernelFamily::gaussian, 1.0}, 10, 4, 9);
  Rng rng(9);
  const Eigen::VectorXd z = unit_feature(rng, map);
  const LocalModel zero{Eigen::VectorXd::Zero(20), 3};

  const LocalModel stepped = ogd_step(zero, z, 1.0, 0.1, LossSpec{0.0});
  CHECK((stepped.theta - 0.2 * z).norm() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(stepped.kernel_index == 3);
  CHECK(zero.theta.isZero());  // input untouched

  const LocalModel frozen = ogd_step(stepped, z, 1.0, 0.0, LossSpec{0.0});
  CHECK(frozen.theta == stepped.theta);
}

TEST_CASE("ogd on a fixed sample descends to interpolation") {
  const auto map = sample_frequencies({KernelFamily::gaussian, 1.0}, 10, 4, 10);
  Rng rng(10);
  const Eigen::VectorXd z = unit_feature(rng, map);
  const double y = 0.8;
  LocalModel model{Eigen::VectorXd::Zero(20), 0};
  const LossSpec spec{0.0};
  double previous = loss(model, z, y, spec);
  int steps = 0;
  while (std::abs(predict(model, z) - y) >= 1e-6) {
    model = ogd_step(model, z, y, 0.05, spec);
    const double current = loss(model, z, y, spec);
    CHECK(current < previous);
    previous = current;
    REQUIRE(++steps < 1000);
  }
}

TEST_CASE("ridge_hindsight solves the regularized normal equations") {
  Rng rng(11);
  const auto map = sample_frequencies({KernelFamily::gaussian, 1.0}, 8, 4, 11);

  SUBCASE("all-zero labels give the zero solution") {
    std::vector<Eigen::VectorXd> features;
    std::vector<double> labels;
    for (int t = 0; t < 20; ++t) {
      features.push_back(unit_feature(rng, map));
      labels.push_back(0.0);
    }
    CHECK(ridge_hindsight(features, labels, 0.5).theta.isZero(1e-12));
  }

  SUBCASE("T=1 interpolates in the small-lambda limit") {
    const Eigen::VectorXd z = unit_feature(rng, map);
    const auto theta = ridge_hindsight({z}, {1.0}, 1e-12);
    CHECK(predict(theta, z) == doctest::Approx(1.0).epsilon(1e-6));
  }

  SUBCASE("beats 1000 random probes on a random instance") {
    std::vector<Eigen::VectorXd> features;
    std::vector<double> labels;
    for (int t = 0; t < 200; ++t) {
      features.push_back(unit_feature(rng, map));
      labels.push_back(rng.gaussian());
    }
    const double lambda = 0.01;
    const auto star = ridge_hindsight(features, labels, lambda);
    const auto cumulative = [&](const Eigen::VectorXd& theta) {
      double total = 0.0;
      for (std::size_t t = 0; t < features.size(); ++t) {
        total += loss(LocalModel{theta, 0}, features[t], labels[t], LossSpec{lambda});
      }
      return total;
    };
    const double best = cumulative(star.theta);
    for (int probe = 0; probe < 1000; ++probe) {
      const double scale = std::pow(10.0, (probe % 5) - 2);
      Eigen::VectorXd candidate = star.theta + scale * random_vec(rng, 16, 0.5);
      CHECK(best <= cumulative(candidate) + 1e-9);
    }
  }

  SUBCASE("singular system with lambda = 0 raises NumericError") {
    const Eigen::VectorXd z = unit_feature(rng, map);
    CHECK_THROWS_AS(ridge_hindsight({z, z}, {1.0, 0.5}, 0.0), NumericError);
  }

  SUBCASE("empty input is invalid") {
    CHECK_THROWS_AS(ridge_hindsight({}, {}, 0.1), std::invalid_argument);
  }
}

TEST_CASE("per-kernel OGD regret vs hindsight shrinks per step") {
  // regret_T / T at T = 8000 should be at most half its value at T = 2000
  // on a stream the feature class can track.
  const int dim = 8;
  const auto map = sample_frequencies({KernelFamily::gaussian, 1.0}, 25, dim, 13);
  Rng rng(13);
  Eigen::VectorXd target = random_vec(rng, 50);
  target /= target.norm();

  const auto run_regret = [&](int T) {
    Rng stream_rng(29);
    std::vector<Eigen::VectorXd> features;
    std::vector<double> labels;
    features.reserve(T);
    for (int t = 0; t < T; ++t) {
      Eigen::VectorXd x = random_vec(stream_rng, dim);
      x /= x.norm();
      features.push_back(map.transform(x));
      labels.push_back(target.dot(features.back()) + 0.01 * stream_rng.gaussian());
    }
    const double lambda = 0.01;
    const double eta = 1.0 / std::sqrt(static_cast<double>(T));
    LocalModel model{Eigen::VectorXd::Zero(50), 0};
    double learner = 0.0;
    for (int t = 0; t < T; ++t) {
      learner += loss(model, features[t], labels[t], LossSpec{lambda});
      model = ogd_step(model, features[t], labels[t], eta, LossSpec{lambda});
    }
    const auto star = ridge_hindsight(features, labels, lambda);
    double comparator = 0.0;
    for (int t = 0; t < T; ++t) {
      comparator += loss(star, features[t], labels[t], LossSpec{lambda});
    }
    return (learner - comparator) / static_cast<double>(T);
  };

  CHECK(run_regret(8000) <= 0.5 * run_regret(2000));
}
