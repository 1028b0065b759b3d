#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "leverage/dataset.hpp"
#include "leverage/rng.hpp"

namespace leverage {

/// Simulation families:
///   ImUniform - imbalanced 80/20, uniform boxes offset by 0.3
///   NormMix   - three-component Gaussian mixtures per class (p even)
///   T3        - multivariate t(3) around +-0.75, whole variate scaled by 1/10
///   T3Mix     - two-component t(3) mixtures per class
enum class Scenario { ImUniform, NormMix, T3, T3Mix };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& name);

struct ScenarioSpec {
  Scenario scenario = Scenario::ImUniform;
  Eigen::Index n = 0;
  int p = 8;
  std::uint64_t seed = 0;
};

/// Bookkeeping counters filled during generation: class sizes and, for the
/// mixture scenarios, per-component tallies.
struct ScenarioStats {
  Eigen::Index n_pos = 0;
  Eigen::Index n_neg = 0;
  std::array<Eigen::Index, 3> pos_components{};
  std::array<Eigen::Index, 3> neg_components{};
};

/// Labels are drawn i.i.d. with the scenario's class proportions, then
/// covariates from the conditional law. Pure function of (spec.seed, spec).
Dataset gen_scenario(const ScenarioSpec& spec, ScenarioStats* stats = nullptr);

/// Independent N(mean_l, 1) coordinates (Box-Muller normals).
Eigen::VectorXd sample_mvnormal(const Eigen::VectorXd& mean, Rng& rng);

/// Independent N(mean_l, var_l) coordinates.
Eigen::VectorXd sample_mvnormal(const Eigen::VectorXd& mean,
                                const Eigen::VectorXd& diag_var, Rng& rng);

/// mean + Z / sqrt(W/dof) with Z standard normal and W chi-square(dof).
Eigen::VectorXd sample_mvt(const Eigen::VectorXd& mean, Rng& rng, int dof = 3);

}  // namespace leverage
