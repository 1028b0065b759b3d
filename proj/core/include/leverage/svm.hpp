#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "leverage/dataset.hpp"

namespace leverage {

/// Thrown when the solver exhausts max_epochs; carries the achieved gap.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double achieved_gap)
      : std::runtime_error(what), achieved_gap_(achieved_gap) {}
  double achieved_gap() const { return achieved_gap_; }

 private:
  double achieved_gap_;
};

struct FitReport {
  /// Best objective value seen up to each epoch; non-increasing.
  std::vector<double> objective_trace;
  double final_objective = 0.0;
  double duality_gap = 0.0;  // relative gap certificate at the returned point
  int epochs = 0;
  bool converged = false;
};

/// Value of (1/m) sum_i w_i [1 - y_i f(x_i, beta)]_+ + (lambda/2) |slope|^2.
double svm_objective(const Dataset& data,
                     std::span<const WeightedInstance> instances,
                     const Hyperplane& beta, double lambda);

/// Minimizes the weighted hinge + ridge objective above. The intercept is
/// unpenalized. Deterministic: identical inputs produce bit-identical
/// results. Convergence is certified through the duality gap of the
/// equivalent box-constrained dual; the returned point's relative objective
/// gap to the optimum is at most config.tolerance.
///
/// Requires lambda > 0 (the minimizer need not exist at lambda = 0).
/// Single-class instance sets are legal and yield slope 0 with the margin
/// intercept. Throws SolverError when max_epochs is hit first.
Hyperplane weighted_svm_fit(const Dataset& data,
                            std::span<const WeightedInstance> instances,
                            const SolverConfig& config,
                            FitReport* report = nullptr);

/// -(1/m) sum_i w_i I(y_i f_i <= 1) y_i x~_i with x~ = (1, x). Entry 0 is the
/// intercept coordinate.
Eigen::VectorXd empirical_gradient(const Hyperplane& beta, const Dataset& data,
                                   std::span<const WeightedInstance> instances);

/// Minimum-norm element of the (margin_tol-relaxed) subdifferential of the
/// objective at beta: points with |1 - y f| <= margin_tol get a free hinge
/// coefficient in [0, 1], chosen to minimize the norm. Used as an optimality
/// certificate in tests.
Eigen::VectorXd min_norm_subgradient(const Dataset& data,
                                     std::span<const WeightedInstance> instances,
                                     const Hyperplane& beta, double lambda,
                                     double margin_tol = 1e-6);

/// Slow-but-sure reference minimizer of the same objective, via a primal-dual
/// interior-point method on the slack-variable quadratic program. Independent
/// of the weighted_svm_fit code path; desk scale only (m <= 500).
Hyperplane reference_solve(const Dataset& data,
                           std::span<const WeightedInstance> instances,
                           const SolverConfig& config);

}  // namespace leverage
