#pragma once

#include <span>
#include <vector>

#include "leverage/dataset.hpp"

namespace leverage {

/// Strictly increasing positive penalty candidates.
struct LambdaGrid {
  std::vector<double> values;
};

void validate(const LambdaGrid& grid);

/// Eight log-spaced values over [1e-6, 1e-1], scaled by n^{-1/2} so the
/// whole grid vanishes at the rate the subsampled fit requires.
LambdaGrid default_lambda_grid(Eigen::Index n);

struct GacvStats {
  int degenerate_refits = 0;  // refits left with a single class
};

/// Weighted leave-one-out hinge score
///   (1/n) sum_k w_k [1 - y_k f^{[-k]}(x_k)]_+,
/// where f^{[-k]} is refit on the remaining instances, warm-started from the
/// all-data fit. Refits are solved to a relative gap of
/// max(config.tolerance, 1e-6). With unit weights this is the plain
/// unweighted cross-validation objective. When `scored` is nonempty only
/// those instance positions are held out and averaged.
double gacv_score(const Dataset& data,
                  std::span<const WeightedInstance> instances, double lambda,
                  const SolverConfig& config, GacvStats* stats = nullptr,
                  std::span<const Eigen::Index> scored = {});

/// Grid argmin of gacv_score; ties resolve to the smaller lambda.
double select_lambda(const Dataset& data,
                     std::span<const WeightedInstance> instances,
                     const LambdaGrid& grid, const SolverConfig& config,
                     GacvStats* stats = nullptr,
                     std::span<const Eigen::Index> scored = {});

}  // namespace leverage
