#include "leverage/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "leverage/svm.hpp"

namespace leverage {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

bool draw_has_both_classes(const Dataset& data, const SubsampleDraw& draw) {
  bool pos = false, neg = false;
  for (Eigen::Index idx : draw.indices) {
    (data.label(idx) > 0 ? pos : neg) = true;
    if (pos && neg) return true;
  }
  return false;
}

ProbsSummary summarize(const ProbabilityVector& probs) {
  ProbsSummary s;
  s.min_p = probs.probs().minCoeff();
  s.max_p = probs.probs().maxCoeff();
  s.entropy = -(probs.probs().array() * probs.probs().array().log()).sum();
  return s;
}

LeverageFit second_stage(const Dataset& data, const SubsampleDraw& pilot_draw,
                         const ProbabilityVector& probs, Method criterion,
                         Eigen::Index n, std::uint64_t seed,
                         const LambdaGrid* grid, const PipelineOptions& options,
                         PhaseBreakdown* times) {
  auto t0 = clock_type::now();
  const SubsampleDraw draw = draw_with_replacement(probs, n, seed);
  if (times) times->draw_s = seconds_since(t0);

  // union multiset: pilot points at weight exactly 1, drawn points at 1/(N pi)
  std::vector<WeightedInstance> instances;
  instances.reserve(pilot_draw.indices.size() + draw.indices.size());
  for (Eigen::Index idx : pilot_draw.indices) instances.push_back({idx, 1.0});
  for (const WeightedInstance& wi : ht_weights(draw, data.size()))
    instances.push_back(wi);

  t0 = clock_type::now();
  LambdaGrid default_grid;
  if (!grid) {
    default_grid = default_lambda_grid(static_cast<Eigen::Index>(instances.size()));
    grid = &default_grid;
  }
  std::vector<Eigen::Index> drawn_positions;
  if (options.gacv_scope == GacvScope::DrawnOnly) {
    drawn_positions.resize(draw.indices.size());
    for (std::size_t i = 0; i < draw.indices.size(); ++i)
      drawn_positions[i] =
          static_cast<Eigen::Index>(pilot_draw.indices.size() + i);
  }
  SolverConfig cfg = options.solver;
  cfg.lambda = select_lambda(data, instances, *grid, cfg, nullptr,
                             drawn_positions);
  Hyperplane beta = weighted_svm_fit(data, instances, cfg);
  if (times) times->fit_s = seconds_since(t0);

  LeverageFit fit;
  fit.beta = std::move(beta);
  fit.criterion = criterion;
  fit.n = n;
  fit.n0 = static_cast<Eigen::Index>(pilot_draw.indices.size());
  fit.lambda = cfg.lambda;
  fit.probs_summary = summarize(probs);
  fit.pilot_seed = pilot_draw.seed;
  fit.draw_seed = draw.seed;
  return fit;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::A: return "LC-A";
    case Method::L: return "LC-L";
    case Method::Unif: return "LC-UNIF";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  if (name == "A" || name == "a" || name == "LC-A") return Method::A;
  if (name == "L" || name == "l" || name == "LC-L") return Method::L;
  if (name == "UNIF" || name == "unif" || name == "LC-UNIF") return Method::Unif;
  throw std::invalid_argument("unknown method: " + name);
}

SubsampleDraw pilot_draw_only(const Dataset& data, Eigen::Index n0,
                              std::uint64_t seed) {
  const ProbabilityVector uniform = uniform_probs(data.size());
  std::uint64_t attempt_seed = seed;
  for (int attempt = 0; attempt < 10; ++attempt) {
    SubsampleDraw draw = draw_with_replacement(uniform, n0, attempt_seed);
    if (draw_has_both_classes(data, draw)) return draw;
    attempt_seed = derive_seed(seed, 0x9EDBAA, static_cast<std::uint64_t>(attempt + 1));
  }
  throw std::runtime_error("pilot draw contained a single class in 10 attempts");
}

PilotEstimate pilot_fit(const Dataset& data, Eigen::Index n0, std::uint64_t seed,
                        const LambdaGrid* grid, const PipelineOptions& options) {
  const Eigen::Index min_n0 = std::max<Eigen::Index>(20, 2 * (data.dim() + 1));
  if (n0 < min_n0)
    throw std::invalid_argument("pilot_fit: n0 below max(20, 2(p+1))");
  if (!data.has_both_classes())
    throw std::invalid_argument("pilot_fit: data must contain both classes");

  PilotEstimate pilot;
  pilot.pilot_draw = pilot_draw_only(data, n0, seed);

  std::vector<WeightedInstance> instances;
  instances.reserve(pilot.pilot_draw.indices.size());
  for (Eigen::Index idx : pilot.pilot_draw.indices)
    instances.push_back({idx, 1.0});

  LambdaGrid default_grid;
  if (!grid) {
    default_grid = default_lambda_grid(n0);
    grid = &default_grid;
  }
  SolverConfig cfg = options.solver;
  cfg.lambda = select_lambda(data, instances, *grid, cfg);
  pilot.lambda0 = cfg.lambda;
  pilot.beta0 = weighted_svm_fit(data, instances, cfg);

  Eigen::VectorXd residuals(n0);
  for (Eigen::Index i = 0; i < n0; ++i) {
    const Eigen::Index idx = pilot.pilot_draw.indices[static_cast<std::size_t>(i)];
    residuals[i] = 1.0 - data.label(idx) *
                             (pilot.beta0.intercept +
                              pilot.beta0.slope.dot(data.row(idx)));
  }
  const double h = silverman_bandwidth(residuals);
  pilot.hessian = estimate_hessian(data, pilot.pilot_draw, pilot.beta0, h);
  pilot.hessian_inv = regularized_inverse(pilot.hessian);
  return pilot;
}

LeverageFit leverage_fit(const Dataset& data, const PilotEstimate& pilot,
                         Method criterion, Eigen::Index n, std::uint64_t seed,
                         const LambdaGrid* grid, const PipelineOptions& options,
                         PhaseBreakdown* times) {
  if (n < 1) throw std::invalid_argument("leverage_fit: n must be >= 1");
  const double delta = options.delta_coef / static_cast<double>(data.size());

  auto t0 = clock_type::now();
  ProbabilityVector probs =
      criterion == Method::Unif
          ? uniform_probs(data.size())
          : optimal_probs(data, pilot.beta0,
                          criterion == Method::A ? &pilot.hessian_inv : nullptr,
                          criterion == Method::A ? OptimalityCriterion::A
                                                 : OptimalityCriterion::L,
                          delta);
  if (times) times->probs_s = seconds_since(t0);

  return second_stage(data, pilot.pilot_draw, probs, criterion, n, seed, grid,
                      options, times);
}

LeverageFit uniform_leverage_fit(const Dataset& data,
                                 const SubsampleDraw& pilot_draw,
                                 Eigen::Index n, std::uint64_t seed,
                                 const LambdaGrid* grid,
                                 const PipelineOptions& options,
                                 PhaseBreakdown* times) {
  if (n < 1) throw std::invalid_argument("uniform_leverage_fit: n must be >= 1");
  auto t0 = clock_type::now();
  ProbabilityVector probs = uniform_probs(data.size());
  if (times) times->probs_s = seconds_since(t0);
  return second_stage(data, pilot_draw, probs, Method::Unif, n, seed, grid,
                      options, times);
}

}  // namespace leverage
