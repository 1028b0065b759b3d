#include "leverage/datagen.hpp"

#include <cmath>
#include <stdexcept>

namespace leverage {

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::ImUniform: return "imuniform";
    case Scenario::NormMix: return "normmix";
    case Scenario::T3: return "t3";
    case Scenario::T3Mix: return "t3mix";
  }
  return "?";
}

Scenario scenario_from_string(const std::string& name) {
  if (name == "imuniform" || name == "I" || name == "1") return Scenario::ImUniform;
  if (name == "normmix" || name == "II" || name == "2") return Scenario::NormMix;
  if (name == "t3" || name == "III" || name == "3") return Scenario::T3;
  if (name == "t3mix" || name == "IV" || name == "4") return Scenario::T3Mix;
  throw std::invalid_argument("unknown scenario: " + name);
}

Eigen::VectorXd sample_mvnormal(const Eigen::VectorXd& mean, Rng& rng) {
  Eigen::VectorXd out(mean.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = mean[i] + rng.normal();
  return out;
}

Eigen::VectorXd sample_mvnormal(const Eigen::VectorXd& mean,
                                const Eigen::VectorXd& diag_var, Rng& rng) {
  if (mean.size() != diag_var.size())
    throw std::invalid_argument("sample_mvnormal: size mismatch");
  Eigen::VectorXd out(mean.size());
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out[i] = mean[i] + std::sqrt(diag_var[i]) * rng.normal();
  return out;
}

Eigen::VectorXd sample_mvt(const Eigen::VectorXd& mean, Rng& rng, int dof) {
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  const double w = std::max(rng.chi_squared(dof), 1e-300);
  return mean + z / std::sqrt(w / static_cast<double>(dof));
}

namespace {

Eigen::VectorXd halves(int p, double first, double second) {
  Eigen::VectorXd v(p);
  v.head(p / 2).setConstant(first);
  v.tail(p - p / 2).setConstant(second);
  return v;
}

}  // namespace

Dataset gen_scenario(const ScenarioSpec& spec, ScenarioStats* stats) {
  if (spec.n < 1) throw std::invalid_argument("gen_scenario: N must be >= 1");
  if (spec.p < 1) throw std::invalid_argument("gen_scenario: p must be >= 1");
  if (spec.scenario == Scenario::NormMix && (spec.p < 2 || spec.p % 2 != 0))
    throw std::invalid_argument("gen_scenario: NormMix needs even p >= 2");

  const int p = spec.p;
  Rng rng(spec.seed);
  RowMatrixXd x(spec.n, p);
  Eigen::VectorXd y(spec.n);
  ScenarioStats local;
  ScenarioStats& st = stats ? *stats : local;
  st = ScenarioStats{};

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(p);

  // NormMix component means, per class
  const Eigen::VectorXd mu_p1 = halves(p, 0.0, 3.0);
  const Eigen::VectorXd mu_p2 = halves(p, -3.0, 5.0);
  const Eigen::VectorXd mu_p3 = (-3.0) * ones;
  const Eigen::VectorXd mu_n1 = halves(p, 0.0, -3.0);
  const Eigen::VectorXd mu_n2 = halves(p, 3.0, -5.0);
  const Eigen::VectorXd mu_n3 = halves(p, 3.0, 5.0);

  for (Eigen::Index i = 0; i < spec.n; ++i) {
    const double frac_pos = spec.scenario == Scenario::ImUniform ? 0.8 : 0.5;
    const bool pos = rng.uniform01() < frac_pos;
    y[i] = pos ? 1.0 : -1.0;
    (pos ? st.n_pos : st.n_neg) += 1;

    switch (spec.scenario) {
      case Scenario::ImUniform: {
        const double shift = pos ? 0.0 : 0.3;
        for (int j = 0; j < p; ++j) x(i, j) = shift + rng.uniform01();
        break;
      }
      case Scenario::NormMix: {
        const double u = rng.uniform01();
        const int comp = u < 0.5 ? 0 : (u < 0.75 ? 1 : 2);
        (pos ? st.pos_components : st.neg_components)[static_cast<std::size_t>(comp)] += 1;
        const Eigen::VectorXd& mu =
            pos ? (comp == 0 ? mu_p1 : comp == 1 ? mu_p2 : mu_p3)
                : (comp == 0 ? mu_n1 : comp == 1 ? mu_n2 : mu_n3);
        x.row(i) = sample_mvnormal(mu, rng).transpose();
        break;
      }
      case Scenario::T3: {
        // whole variate scaled: x = (mu + t3) / 10, class means +-0.075
        const Eigen::VectorXd mu = (pos ? 0.75 : -0.75) * ones;
        x.row(i) = (sample_mvt(mu, rng) / 10.0).transpose();
        break;
      }
      case Scenario::T3Mix: {
        const double u = rng.uniform01();
        const int comp = pos ? (u < 0.3 ? 0 : 1) : (u < 0.4 ? 0 : 1);
        (pos ? st.pos_components : st.neg_components)[static_cast<std::size_t>(comp)] += 1;
        const double c = pos ? (comp == 0 ? 2.0 : -3.0)
                             : (comp == 0 ? -1.0 : 8.0);
        x.row(i) = sample_mvt(c * ones, rng).transpose();
        break;
      }
    }
  }
  return Dataset(std::move(x), std::move(y));
}

}  // namespace leverage
