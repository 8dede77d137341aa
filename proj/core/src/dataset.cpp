#include "phykrig/dataset.hpp"

#include <cmath>
#include <stdexcept>

namespace phykrig {

ColumnTransform ColumnTransform::identity(int dim) {
  return ColumnTransform{Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)};
}

namespace {
Eigen::VectorXd column_std(const Eigen::MatrixXd& X, const Eigen::VectorXd& mean,
                           double min_scale) {
  const double n = static_cast<double>(X.rows());
  Eigen::VectorXd var = ((X.rowwise() - mean.transpose()).array().square().colwise().sum() / n)
                            .transpose();
  return var.array().sqrt().max(min_scale);
}
}  // namespace

ColumnTransform ColumnTransform::standardize(const Eigen::MatrixXd& X, double min_scale) {
  if (X.rows() == 0) return identity(static_cast<int>(X.cols()));
  Eigen::VectorXd mean = X.colwise().mean().transpose();
  return ColumnTransform{mean, column_std(X, mean, min_scale)};
}

ColumnTransform ColumnTransform::scale_only(const Eigen::MatrixXd& X, double min_scale) {
  if (X.rows() == 0) return identity(static_cast<int>(X.cols()));
  Eigen::VectorXd mean = X.colwise().mean().transpose();
  return ColumnTransform{Eigen::VectorXd::Zero(X.cols()), column_std(X, mean, min_scale)};
}

Eigen::MatrixXd ColumnTransform::apply(const Eigen::MatrixXd& X) const {
  if (X.cols() != shift.size()) {
    throw std::invalid_argument("ColumnTransform: dimension mismatch");
  }
  return (X.rowwise() - shift.transpose()).array().rowwise() /
         scale.transpose().array();
}

Eigen::VectorXd ColumnTransform::apply_vector(const Eigen::VectorXd& x) const {
  if (x.size() != shift.size()) {
    throw std::invalid_argument("ColumnTransform: dimension mismatch");
  }
  return (x - shift).cwiseQuotient(scale);
}

Eigen::MatrixXd ColumnTransform::invert(const Eigen::MatrixXd& Z) const {
  if (Z.cols() != shift.size()) {
    throw std::invalid_argument("ColumnTransform: dimension mismatch");
  }
  return (Z.array().rowwise() * scale.transpose().array()).rowwise() +
         shift.transpose().array();
}

Dataset::Dataset(Eigen::MatrixXd X_, Eigen::MatrixXd y_) : X(std::move(X_)), y(std::move(y_)) {
  validate();
}

Dataset Dataset::empty(int input_dim, int output_dim) {
  Dataset d;
  d.X.resize(0, input_dim);
  d.y.resize(0, output_dim);
  return d;
}

void Dataset::validate() const {
  if (X.rows() != y.rows()) {
    throw std::invalid_argument("Dataset: X and y row counts differ");
  }
  if (X.cols() < 1 || y.cols() < 1) {
    throw std::invalid_argument("Dataset: need at least one input and one output column");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw std::invalid_argument("Dataset: non-finite entries");
  }
}

}  // namespace phykrig
