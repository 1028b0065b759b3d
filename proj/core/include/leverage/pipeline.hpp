#pragma once

#include <cstdint>
#include <optional>

#include "leverage/dataset.hpp"
#include "leverage/hessian.hpp"
#include "leverage/sampling.hpp"
#include "leverage/tuning.hpp"

namespace leverage {

/// Subsampling rule of the second stage.
enum class Method { A, L, Unif };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

/// Whether the leave-one-out tuning sum runs over the combined pilot+drawn
/// multiset (default, consistent with the fit) or the drawn points only.
enum class GacvScope { Combined, DrawnOnly };

struct PipelineOptions {
  double delta_coef = 0.01;  // floor delta = delta_coef / N
  GacvScope gacv_scope = GacvScope::Combined;
  SolverConfig solver;
};

/// Pilot stage output: coefficients, smoothed Hessian with its regularized
/// inverse, and the uniform draw they came from.
struct PilotEstimate {
  Hyperplane beta0;
  HessianEstimate hessian;
  Eigen::MatrixXd hessian_inv;
  SubsampleDraw pilot_draw;
  double lambda0 = 0.0;
};

struct ProbsSummary {
  double min_p = 0.0;
  double max_p = 0.0;
  double entropy = 0.0;  // -sum pi log pi
};

struct LeverageFit {
  Hyperplane beta;
  Method criterion = Method::Unif;
  Eigen::Index n = 0;
  Eigen::Index n0 = 0;
  double lambda = 0.0;
  ProbsSummary probs_summary;
  std::uint64_t pilot_seed = 0;
  std::uint64_t draw_seed = 0;
};

/// Wall-clock seconds of the second-stage phases. Tuning time is part of
/// fit_s.
struct PhaseBreakdown {
  double probs_s = 0.0;
  double draw_s = 0.0;
  double fit_s = 0.0;
};

/// Uniform pilot draw of n0 points, lambda0 by unweighted cross-validation,
/// pilot coefficients, then the kernel Hessian at the Silverman bandwidth of
/// the pilot margins and its regularized inverse. A single-class draw is
/// redrawn with a derived seed, up to 10 attempts.
///
/// Requires n0 >= max(20, 2(p+1)) and both classes present in the data.
/// Passing grid = nullptr selects the default grid for n0 points.
PilotEstimate pilot_fit(const Dataset& data, Eigen::Index n0, std::uint64_t seed,
                        const LambdaGrid* grid = nullptr,
                        const PipelineOptions& options = {});

/// Second stage: probabilities for the chosen method (Unif bypasses the
/// pilot quantities), a draw of n points, the pilot/drawn union multiset
/// with Horvitz-Thompson weights (pilot points carry weight exactly 1),
/// weighted cross-validated lambda, and the final weighted fit.
LeverageFit leverage_fit(const Dataset& data, const PilotEstimate& pilot,
                         Method criterion, Eigen::Index n, std::uint64_t seed,
                         const LambdaGrid* grid = nullptr,
                         const PipelineOptions& options = {},
                         PhaseBreakdown* times = nullptr);

/// Same second stage for the uniform method given only a pilot draw; used
/// when no pilot estimation is wanted (the uniform rule never reads it).
LeverageFit uniform_leverage_fit(const Dataset& data,
                                 const SubsampleDraw& pilot_draw,
                                 Eigen::Index n, std::uint64_t seed,
                                 const LambdaGrid* grid = nullptr,
                                 const PipelineOptions& options = {},
                                 PhaseBreakdown* times = nullptr);

/// Uniform draw of n0 indices with single-class redraws, as in pilot_fit,
/// but without any estimation.
SubsampleDraw pilot_draw_only(const Dataset& data, Eigen::Index n0,
                              std::uint64_t seed);

}  // namespace leverage
