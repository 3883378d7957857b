#pragma once

#include <Eigen/Core>
#include <vector>

namespace streamkl {

// Per-kernel linear model in random-feature space: f(x) = theta' z(x).
struct LocalModel {
  Eigen::VectorXd theta;
  int kernel_index = 0;
};

// Regularized least squares: L(theta; z, y) = (y - theta'z)^2 + lambda |theta|^2.
struct LossSpec {
  double lambda = 0.0;
};

double predict(const LocalModel& model, const Eigen::VectorXd& z);

double loss(const LocalModel& model, const Eigen::VectorXd& z, double y,
            const LossSpec& spec);

// 2 (theta'z - y) z + 2 lambda theta.
Eigen::VectorXd gradient(const LocalModel& model, const Eigen::VectorXd& z, double y,
                         const LossSpec& spec);

// One online gradient descent step; the input model is left untouched.
LocalModel ogd_step(const LocalModel& model, const Eigen::VectorXd& z, double y,
                    double eta_l, const LossSpec& spec);

// Hindsight comparator: minimizer of sum_t (y_t - theta'z_t)^2 + lambda T |theta|^2,
// i.e. the per-step regularizer summed over the stream. Solved through the
// normal equations; throws NumericError when the system is singular
// (lambda = 0 on rank-deficient data) or the residual check fails.
LocalModel ridge_hindsight(const std::vector<Eigen::VectorXd>& features,
                           const std::vector<double>& labels, double lambda);

}  // namespace streamkl
