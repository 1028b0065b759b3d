#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "leverage/dataset.hpp"
#include "leverage/rng.hpp"

namespace leverage {

/// Strictly positive weights over a dataset, summing to 1 within 1e-12.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(Eigen::VectorXd probs);

  Eigen::Index size() const { return probs_.size(); }
  double operator[](Eigen::Index i) const { return probs_[i]; }
  const Eigen::VectorXd& probs() const { return probs_; }

 private:
  Eigen::VectorXd probs_;
};

/// With-replacement draw: selected dataset positions plus the probability
/// each one was drawn with, and the seed that produced it.
struct SubsampleDraw {
  std::vector<Eigen::Index> indices;
  std::vector<double> draw_probs;
  std::uint64_t seed = 0;
};

enum class OptimalityCriterion { A, L };

/// pi_j = 1/N for every j.
ProbabilityVector uniform_probs(Eigen::Index n);

/// Normalizes max{indicator_j * score_j, delta} over the dataset. Exposed so
/// the thresholding rule can be exercised on raw scores directly.
ProbabilityVector probs_from_scores(const Eigen::VectorXd& scores,
                                    const std::vector<char>& indicators,
                                    double delta);

/// Plug-in subsampling probabilities
///   pi_j ∝ max{ I(y_j f(x_j, pilot) <= 1) * s_j , delta },
/// with s_j = |Hinv (1, x_j)| for the A criterion (hessian_inv required) and
/// s_j = |(1, x_j)| for the L criterion. When no indicator fires the result
/// is exactly uniform.
ProbabilityVector optimal_probs(const Dataset& data, const Hyperplane& pilot_beta,
                                const Eigen::MatrixXd* hessian_inv,
                                OptimalityCriterion criterion, double delta);

/// Walker/Vose alias table: O(N) build, O(1) per categorical draw.
class AliasTable {
 public:
  explicit AliasTable(const ProbabilityVector& probs);

  Eigen::Index sample(Rng& rng) const;
  Eigen::Index size() const { return static_cast<Eigen::Index>(accept_.size()); }

 private:
  std::vector<double> accept_;
  std::vector<Eigen::Index> alias_;
};

/// n independent categorical draws; deterministic for a fixed seed.
SubsampleDraw draw_with_replacement(const ProbabilityVector& probs,
                                    Eigen::Index n, std::uint64_t seed);

/// Horvitz-Thompson weights 1/(N pi) for each drawn position.
std::vector<WeightedInstance> ht_weights(const SubsampleDraw& draw,
                                         Eigen::Index dataset_size);

/// Audit export, one "index,pi" row per entry.
void write_probs_csv(const ProbabilityVector& probs,
                     const std::filesystem::path& path);

}  // namespace leverage
