#include "leverage/tuning.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "leverage/svm.hpp"
#include "smo_internal.hpp"

namespace leverage {

void validate(const LambdaGrid& grid) {
  if (grid.values.empty())
    throw std::invalid_argument("LambdaGrid: empty");
  double prev = 0.0;
  for (double v : grid.values) {
    if (!(v > prev))
      throw std::invalid_argument("LambdaGrid: values must be positive and strictly increasing");
    prev = v;
  }
}

LambdaGrid default_lambda_grid(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("default_lambda_grid: n must be >= 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  LambdaGrid grid;
  for (int k = 0; k < 8; ++k)
    grid.values.push_back(std::pow(10.0, -6.0 + 5.0 * k / 7.0) * scale);
  return grid;
}

namespace {

// Scores every lambda of a (descending-ordered) list with warm starts carried
// across lambdas and across the leave-one-out refits.
std::vector<double> scores_descending(const Dataset& data,
                                      std::span<const WeightedInstance> instances,
                                      const std::vector<double>& lambdas_desc,
                                      const SolverConfig& config,
                                      GacvStats* stats,
                                      std::span<const Eigen::Index> scored) {
  const Eigen::Index m = static_cast<Eigen::Index>(instances.size());
  if (m < 3) throw std::invalid_argument("gacv_score: need at least 3 instances");

  detail::SmoProblem prob = detail::gather_problem(data, instances, 1.0);
  prob.excluded.assign(static_cast<std::size_t>(m), 0);

  Eigen::Index npos = 0, nneg = 0;
  for (Eigen::Index i = 0; i < m; ++i) (prob.y[i] > 0 ? npos : nneg) += 1;

  std::vector<Eigen::Index> holdout(scored.begin(), scored.end());
  if (holdout.empty()) {
    holdout.resize(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) holdout[static_cast<std::size_t>(i)] = i;
  }
  for (Eigen::Index k : holdout)
    if (k < 0 || k >= m)
      throw std::invalid_argument("gacv_score: scored position out of range");

  detail::SmoOptions full_opt;
  full_opt.tolerance = config.tolerance;
  full_opt.max_epochs = config.max_epochs;
  // leave-one-out refits start from the all-data duals, so a loose gap and a
  // hard epoch budget keep the sweep bounded; the budget only ever binds at
  // near-degenerate penalties whose scores are flat anyway
  detail::SmoOptions loo_opt = full_opt;
  loo_opt.tolerance = std::max(config.tolerance, 1e-6);
  loo_opt.max_epochs = std::min(config.max_epochs, 500);

  std::vector<double> scores;
  scores.reserve(lambdas_desc.size());
  detail::SmoState full_state;  // carried across the lambda sweep

  const bool grid_mode = lambdas_desc.size() > 1;
  for (double lambda : lambdas_desc) {
    prob.lambda = lambda;
    prob.m_eff = static_cast<double>(m);
    std::fill(prob.excluded.begin(), prob.excluded.end(), 0);
    const detail::SmoResult full_res =
        detail::smo_solve(prob, full_state, full_opt);
    if (!full_res.converged) {
      // during a grid sweep a pathological penalty is skipped rather than
      // fatal; a directly requested lambda still reports the failure
      if (grid_mode) {
        scores.push_back(std::numeric_limits<double>::infinity());
        continue;
      }
      throw SolverError("gacv_score: base fit did not converge",
                        full_res.rel_gap);
    }

    // dropping one instance re-equilibrates only near the margin; restrict
    // the refit searches to the closest-to-margin coordinates and let the
    // global gap certificate widen them when that is not enough
    Eigen::VectorXd vbase = prob.y - prob.x * full_state.beta1;
    std::vector<Eigen::Index> focus(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) focus[static_cast<std::size_t>(i)] = i;
    const Eigen::Index f_size = std::min<Eigen::Index>(m, 128);
    std::nth_element(focus.begin(), focus.begin() + f_size, focus.end(),
                     [&](Eigen::Index a, Eigen::Index b) {
                       return std::abs(vbase[a] - full_state.beta0) <
                              std::abs(vbase[b] - full_state.beta0);
                     });
    focus.resize(static_cast<std::size_t>(f_size));
    detail::SmoOptions refit_opt = loo_opt;
    refit_opt.focus = &focus;

    double total = 0.0;
    bool refits_ok = true;
    prob.m_eff = static_cast<double>(m - 1);
    for (Eigen::Index k : holdout) {
      prob.excluded[static_cast<std::size_t>(k)] = 1;
      if (stats) {
        const bool one_class =
            (prob.y[k] > 0 && npos == 1) || (prob.y[k] < 0 && nneg == 1);
        if (one_class) ++stats->degenerate_refits;
      }
      detail::SmoState refit = full_state;
      // rebalance the constraint locally: absorb the dropped dual mass into
      // near-margin coordinates of the opposite class
      double residual = refit.a[k];
      if (residual > 0.0) {
        refit.a[k] = 0.0;
        for (Eigen::Index idx : focus) {
          if (residual <= 0.0) break;
          if (prob.y[idx] * prob.y[k] > 0 || refit.a[idx] <= 0.0) continue;
          const double take = std::min(refit.a[idx], residual);
          refit.a[idx] -= take;
          residual -= take;
        }
        for (Eigen::Index idx = 0; residual > 0.0 && idx < m; ++idx) {
          if (prob.y[idx] * prob.y[k] > 0 || refit.a[idx] <= 0.0) continue;
          const double take = std::min(refit.a[idx], residual);
          refit.a[idx] -= take;
          residual -= take;
        }
      }
      const detail::SmoResult rr = detail::smo_solve(prob, refit, refit_opt);
      prob.excluded[static_cast<std::size_t>(k)] = 0;
      if (!rr.converged) {
        // an under-converged refit sits near the base fit, which saw the
        // held-out point, and would bias the score down; the whole lambda
        // is disqualified instead
        refits_ok = false;
        break;
      }
      const double f = refit.beta0 + prob.x.row(k).dot(refit.beta1);
      total += prob.w[k] * hinge(1.0 - prob.y[k] * f);
    }
    if (!refits_ok) {
      if (grid_mode) {
        scores.push_back(std::numeric_limits<double>::infinity());
        continue;
      }
      throw SolverError("gacv_score: leave-one-out refit did not converge", 0.0);
    }
    scores.push_back(total / static_cast<double>(holdout.size()));
  }
  return scores;
}

}  // namespace

double gacv_score(const Dataset& data,
                  std::span<const WeightedInstance> instances, double lambda,
                  const SolverConfig& config, GacvStats* stats,
                  std::span<const Eigen::Index> scored) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("gacv_score: lambda must be > 0");
  return scores_descending(data, instances, {lambda}, config, stats, scored)[0];
}

double select_lambda(const Dataset& data,
                     std::span<const WeightedInstance> instances,
                     const LambdaGrid& grid, const SolverConfig& config,
                     GacvStats* stats, std::span<const Eigen::Index> scored) {
  validate(grid);
  std::vector<double> desc(grid.values.rbegin(), grid.values.rend());
  const std::vector<double> scores =
      scores_descending(data, instances, desc, config, stats, scored);

  // argmin; on ties prefer the smaller lambda (weaker regularization)
  double best_lambda = desc.front();
  double best_score = scores.front();
  for (std::size_t i = 1; i < desc.size(); ++i) {
    if (scores[i] < best_score ||
        (scores[i] == best_score && desc[i] < best_lambda)) {
      best_score = scores[i];
      best_lambda = desc[i];
    }
  }
  if (!std::isfinite(best_score))
    throw SolverError("select_lambda: no grid penalty produced converged fits",
                      0.0);
  return best_lambda;
}

}  // namespace leverage
