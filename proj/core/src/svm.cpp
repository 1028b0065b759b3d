#include "leverage/svm.hpp"

#include <cmath>
#include <sstream>

#include "smo_internal.hpp"

namespace leverage {

double svm_objective(const Dataset& data,
                     std::span<const WeightedInstance> instances,
                     const Hyperplane& beta, double lambda) {
  if (instances.empty())
    throw std::invalid_argument("svm_objective: no instances");
  if (beta.slope.size() != data.dim())
    throw std::invalid_argument("svm_objective: dimension mismatch");
  double loss = 0.0;
  for (const WeightedInstance& inst : instances) {
    const double f = beta.intercept + beta.slope.dot(data.row(inst.index));
    loss += inst.weight * hinge(1.0 - data.label(inst.index) * f);
  }
  return loss / static_cast<double>(instances.size()) +
         0.5 * lambda * beta.slope.squaredNorm();
}

Hyperplane weighted_svm_fit(const Dataset& data,
                            std::span<const WeightedInstance> instances,
                            const SolverConfig& config, FitReport* report) {
  if (instances.empty())
    throw std::invalid_argument("weighted_svm_fit: no instances");
  if (!(config.lambda > 0.0))
    throw std::invalid_argument("weighted_svm_fit: lambda must be > 0");
  if (!(config.tolerance > 0.0))
    throw std::invalid_argument("weighted_svm_fit: tolerance must be > 0");

  detail::SmoProblem prob = detail::gather_problem(data, instances, config.lambda);
  detail::SmoState state;
  detail::SmoOptions opt;
  opt.tolerance = config.tolerance;
  opt.max_epochs = config.max_epochs;

  std::vector<double>* trace = report ? &report->objective_trace : nullptr;
  if (trace) trace->clear();

  // continuation: two loosely-solved warm-up stages at shrunken penalties
  // keep small-lambda problems (huge dual caps) from crawling up from zero
  detail::SmoOptions warm_opt = opt;
  warm_opt.tolerance = std::max(1e-4, opt.tolerance);
  warm_opt.max_epochs = std::min(opt.max_epochs, 1000);
  for (double factor : {900.0, 30.0}) {
    prob.lambda = config.lambda * factor;
    (void)detail::smo_solve(prob, state, warm_opt);
  }
  prob.lambda = config.lambda;
  const detail::SmoResult res = detail::smo_solve(prob, state, opt, trace);

  if (report) {
    report->final_objective = res.objective;
    report->duality_gap = res.rel_gap;
    report->epochs = res.epochs;
    report->converged = res.converged;
  }
  if (!res.converged) {
    std::ostringstream msg;
    msg << "weighted_svm_fit: no convergence within " << config.max_epochs
        << " epochs, achieved relative gap " << res.rel_gap;
    throw SolverError(msg.str(), res.rel_gap);
  }
  return Hyperplane{state.beta0, state.beta1};
}

Eigen::VectorXd empirical_gradient(const Hyperplane& beta, const Dataset& data,
                                   std::span<const WeightedInstance> instances) {
  if (beta.slope.size() != data.dim())
    throw std::invalid_argument("empirical_gradient: dimension mismatch");
  if (instances.empty())
    throw std::invalid_argument("empirical_gradient: no instances");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(data.dim() + 1);
  for (const WeightedInstance& inst : instances) {
    const double y = data.label(inst.index);
    const auto x = data.row(inst.index);
    const double f = beta.intercept + beta.slope.dot(x);
    if (y * f <= 1.0) {
      const double s = inst.weight * y;
      g[0] -= s;
      g.tail(data.dim()) -= s * x.transpose();
    }
  }
  return g / static_cast<double>(instances.size());
}

Eigen::VectorXd min_norm_subgradient(const Dataset& data,
                                     std::span<const WeightedInstance> instances,
                                     const Hyperplane& beta, double lambda,
                                     double margin_tol) {
  const Eigen::Index d = data.dim() + 1;
  const double m = static_cast<double>(instances.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
  g.tail(data.dim()) = lambda * beta.slope;

  // points strictly inside the margin contribute fully; points on the margin
  // get a free coefficient in [0, 1]
  std::vector<Eigen::VectorXd> free_terms;
  for (const WeightedInstance& inst : instances) {
    const double y = data.label(inst.index);
    const auto x = data.row(inst.index);
    const double r = 1.0 - y * (beta.intercept + beta.slope.dot(x));
    if (r <= -margin_tol) continue;
    Eigen::VectorXd v(d);
    v[0] = -inst.weight * y / m;
    v.tail(data.dim()) = (-inst.weight * y / m) * x.transpose();
    if (r >= margin_tol)
      g += v;
    else
      free_terms.push_back(std::move(v));
  }

  // coordinate descent on the box [0,1]^k for the free coefficients
  std::vector<double> t(free_terms.size(), 0.0);
  for (int sweep = 0; sweep < 200; ++sweep) {
    double moved = 0.0;
    for (std::size_t j = 0; j < free_terms.size(); ++j) {
      const Eigen::VectorXd& v = free_terms[j];
      const double vv = v.squaredNorm();
      if (vv <= 0.0) continue;
      const double step = std::clamp(t[j] - g.dot(v) / vv, 0.0, 1.0) - t[j];
      if (step != 0.0) {
        g += step * v;
        t[j] += step;
        moved += std::abs(step);
      }
    }
    if (moved < 1e-15) break;
  }
  return g;
}

}  // namespace leverage
