#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace leverage {

using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One labeled observation: p covariates and a label in {+1, -1}.
struct Sample {
  Eigen::VectorXd features;
  int label = 1;
};

/// Immutable collection of samples sharing one dimension. Construction
/// validates labels, finiteness and dimension agreement; afterwards the
/// object is safe to share read-only across threads.
class Dataset {
 public:
  Dataset() = default;

  /// features is N x p, labels has N entries, each exactly +1 or -1.
  Dataset(RowMatrixXd features, Eigen::VectorXd labels);

  static Dataset from_samples(const std::vector<Sample>& samples);

  Eigen::Index size() const { return features_.rows(); }
  Eigen::Index dim() const { return features_.cols(); }

  const RowMatrixXd& features() const { return features_; }
  const Eigen::VectorXd& labels() const { return labels_; }

  auto row(Eigen::Index i) const { return features_.row(i); }
  double label(Eigen::Index i) const { return labels_[i]; }

  bool has_both_classes() const;

  /// Subset by row indices (repetitions allowed).
  Dataset subset(const std::vector<Eigen::Index>& indices) const;

 private:
  RowMatrixXd features_;
  Eigen::VectorXd labels_;
};

/// Separating hyperplane f(x) = intercept + x . slope.
struct Hyperplane {
  double intercept = 0.0;
  Eigen::VectorXd slope;

  Eigen::Index dim() const { return slope.size(); }
};

/// Hinge loss [u]+ = max(u, 0); callers pass u = 1 - y f(x).
inline double hinge(double u) { return u > 0.0 ? u : 0.0; }

double decision_value(const Hyperplane& beta,
                      const Eigen::Ref<const Eigen::VectorXd>& x);

/// Sign rule with the tie f(x) = 0 mapped to +1.
int predict(const Hyperplane& beta, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Fraction of correct predictions, in percent.
double accuracy_pct(const Hyperplane& beta, const Dataset& data);

/// A dataset row together with its fitting weight (a Horvitz-Thompson
/// factor 1/(N pi), or 1 for plain fits).
struct WeightedInstance {
  Eigen::Index index = 0;
  double weight = 1.0;
};

/// All-ones weighting of a full dataset.
std::vector<WeightedInstance> unit_instances(const Dataset& data);

struct SolverConfig {
  double lambda = 0.01;      // ridge penalty on the slope block only
  double tolerance = 1e-8;   // relative objective gap at the returned point
  int max_epochs = 10000;
  std::uint64_t seed = 0;    // reserved; the solver itself is deterministic
};

}  // namespace leverage
