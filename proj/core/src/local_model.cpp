#include "streamkl/local_model.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "streamkl/errors.hpp"

namespace streamkl {

namespace {
void check_dims(const LocalModel& model, const Eigen::VectorXd& z, const char* where) {
  if (model.theta.size() != z.size()) throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}
}  // namespace

double predict(const LocalModel& model, const Eigen::VectorXd& z) {
  check_dims(model, z, "predict");
  return model.theta.dot(z);
}

double loss(const LocalModel& model, const Eigen::VectorXd& z, double y,
            const LossSpec& spec) {
  check_dims(model, z, "loss");
  const double residual = y - model.theta.dot(z);
  return residual * residual + spec.lambda * model.theta.squaredNorm();
}

Eigen::VectorXd gradient(const LocalModel& model, const Eigen::VectorXd& z, double y,
                         const LossSpec& spec) {
  check_dims(model, z, "gradient");
  return 2.0 * (model.theta.dot(z) - y) * z + 2.0 * spec.lambda * model.theta;
}

LocalModel ogd_step(const LocalModel& model, const Eigen::VectorXd& z, double y,
                    double eta_l, const LossSpec& spec) {
  if (eta_l < 0.0) throw std::invalid_argument("ogd_step: eta_l must be nonnegative");
  const Eigen::VectorXd grad = gradient(model, z, y, spec);
  if (!grad.allFinite()) throw NumericError("ogd_step: non-finite gradient");
  return LocalModel{model.theta - eta_l * grad, model.kernel_index};
}

LocalModel ridge_hindsight(const std::vector<Eigen::VectorXd>& features,
                           const std::vector<double>& labels, double lambda) {
  if (features.empty()) throw std::invalid_argument("ridge_hindsight: empty sample list");
  if (features.size() != labels.size()) {
    throw std::invalid_argument("ridge_hindsight: feature/label count mismatch");
  }
  const auto dim = features.front().size();
  const double effective_ridge = lambda * static_cast<double>(features.size());

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  for (std::size_t t = 0; t < features.size(); ++t) {
    if (features[t].size() != dim) throw std::invalid_argument("ridge_hindsight: ragged features");
    gram.selfadjointView<Eigen::Lower>().rankUpdate(features[t]);
    rhs += labels[t] * features[t];
  }
  gram = gram.selfadjointView<Eigen::Lower>();
  gram.diagonal().array() += effective_ridge;

  const auto ldlt = gram.ldlt();
  const Eigen::VectorXd theta = ldlt.solve(rhs);
  // A vanishing pivot means the minimizer is not unique (rank-deficient
  // data with lambda = 0).
  const Eigen::VectorXd pivots = ldlt.vectorD();
  if (pivots.minCoeff() <= 1e-14 * std::max(pivots.maxCoeff(), 1e-300)) {
    throw NumericError("ridge_hindsight: singular normal equations (need lambda > 0)");
  }
  const double scale = std::max(1.0, rhs.norm());
  if (!theta.allFinite() || (gram * theta - rhs).norm() > 1e-8 * scale) {
    throw NumericError("ridge_hindsight: normal-equation residual too large");
  }
  return LocalModel{theta, 0};
}

}  // namespace streamkl
