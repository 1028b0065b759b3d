#include "leverage/dataset.hpp"

#include <cmath>
#include <stdexcept>

namespace leverage {

Dataset::Dataset(RowMatrixXd features, Eigen::VectorXd labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.rows() != labels_.size())
    throw std::invalid_argument("Dataset: feature rows and labels disagree");
  if (features_.rows() < 1 || features_.cols() < 1)
    throw std::invalid_argument("Dataset: need N >= 1 and p >= 1");
  if (!features_.allFinite())
    throw std::invalid_argument("Dataset: non-finite feature value");
  for (Eigen::Index i = 0; i < labels_.size(); ++i) {
    if (labels_[i] != 1.0 && labels_[i] != -1.0)
      throw std::invalid_argument("Dataset: label must be +1 or -1");
  }
}

Dataset Dataset::from_samples(const std::vector<Sample>& samples) {
  if (samples.empty()) throw std::invalid_argument("Dataset: no samples");
  const Eigen::Index p = samples.front().features.size();
  RowMatrixXd x(static_cast<Eigen::Index>(samples.size()), p);
  Eigen::VectorXd y(static_cast<Eigen::Index>(samples.size()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Sample& s = samples[static_cast<std::size_t>(i)];
    if (s.features.size() != p)
      throw std::invalid_argument("Dataset: mixed sample dimensions");
    x.row(i) = s.features.transpose();
    y[i] = static_cast<double>(s.label);
  }
  return Dataset(std::move(x), std::move(y));
}

bool Dataset::has_both_classes() const {
  bool pos = false, neg = false;
  for (Eigen::Index i = 0; i < labels_.size(); ++i) {
    (labels_[i] > 0 ? pos : neg) = true;
    if (pos && neg) return true;
  }
  return false;
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& indices) const {
  RowMatrixXd x(static_cast<Eigen::Index>(indices.size()), dim());
  Eigen::VectorXd y(static_cast<Eigen::Index>(indices.size()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Eigen::Index j = indices[static_cast<std::size_t>(i)];
    if (j < 0 || j >= size())
      throw std::out_of_range("Dataset::subset: index out of range");
    x.row(i) = features_.row(j);
    y[i] = labels_[j];
  }
  return Dataset(std::move(x), std::move(y));
}

double decision_value(const Hyperplane& beta,
                      const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (beta.slope.size() != x.size())
    throw std::invalid_argument("decision_value: dimension mismatch");
  return beta.intercept + beta.slope.dot(x);
}

int predict(const Hyperplane& beta, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return decision_value(beta, x) >= 0.0 ? 1 : -1;
}

double accuracy_pct(const Hyperplane& beta, const Dataset& data) {
  if (beta.slope.size() != data.dim())
    throw std::invalid_argument("accuracy_pct: dimension mismatch");
  const Eigen::VectorXd f =
      (data.features() * beta.slope).array() + beta.intercept;
  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const int yhat = f[i] >= 0.0 ? 1 : -1;
    if (yhat == static_cast<int>(data.label(i))) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(data.size());
}

std::vector<WeightedInstance> unit_instances(const Dataset& data) {
  std::vector<WeightedInstance> out(static_cast<std::size_t>(data.size()));
  for (Eigen::Index i = 0; i < data.size(); ++i)
    out[static_cast<std::size_t>(i)] = {i, 1.0};
  return out;
}

}  // namespace leverage
