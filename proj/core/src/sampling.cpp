#include "leverage/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace leverage {

ProbabilityVector::ProbabilityVector(Eigen::VectorXd probs)
    : probs_(std::move(probs)) {
  if (probs_.size() < 1)
    throw std::invalid_argument("ProbabilityVector: empty");
  for (Eigen::Index i = 0; i < probs_.size(); ++i) {
    if (!(probs_[i] > 0.0) || !std::isfinite(probs_[i]))
      throw std::invalid_argument("ProbabilityVector: entries must be > 0");
  }
  if (std::abs(probs_.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("ProbabilityVector: entries must sum to 1");
}

ProbabilityVector uniform_probs(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("uniform_probs: N must be >= 1");
  return ProbabilityVector(
      Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

ProbabilityVector probs_from_scores(const Eigen::VectorXd& scores,
                                    const std::vector<char>& indicators,
                                    double delta) {
  const Eigen::Index n = scores.size();
  if (n < 1) throw std::invalid_argument("probs_from_scores: empty scores");
  if (static_cast<Eigen::Index>(indicators.size()) != n)
    throw std::invalid_argument("probs_from_scores: indicator length mismatch");
  if (!(delta > 0.0))
    throw std::invalid_argument("probs_from_scores: delta must be > 0");

  Eigen::VectorXd terms(n);
  bool any_active = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(scores[i]))
      throw std::invalid_argument("probs_from_scores: non-finite score");
    const double raw = indicators[static_cast<std::size_t>(i)] ? scores[i] : 0.0;
    terms[i] = std::max(raw, delta);
    any_active |= raw > delta;
  }
  // every term equal to the floor: the normalized result is 1/N exactly
  if (!any_active) return uniform_probs(n);
  return ProbabilityVector(terms / terms.sum());
}

ProbabilityVector optimal_probs(const Dataset& data, const Hyperplane& pilot_beta,
                                const Eigen::MatrixXd* hessian_inv,
                                OptimalityCriterion criterion, double delta) {
  const Eigen::Index n = data.size();
  const Eigen::Index p = data.dim();
  if (criterion == OptimalityCriterion::A &&
      (hessian_inv == nullptr || hessian_inv->rows() != p + 1 ||
       hessian_inv->cols() != p + 1))
    throw std::invalid_argument(
        "optimal_probs: A-criterion needs a (p+1)x(p+1) hessian inverse");

  const Eigen::VectorXd f =
      (data.features() * pilot_beta.slope).array() + pilot_beta.intercept;

  std::vector<char> indicators(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    indicators[static_cast<std::size_t>(i)] = data.label(i) * f[i] <= 1.0;

  Eigen::VectorXd scores(n);
  Eigen::VectorXd xt(p + 1), hx(p + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    xt[0] = 1.0;
    xt.tail(p) = data.row(i).transpose();
    if (criterion == OptimalityCriterion::A) {
      hx.noalias() = (*hessian_inv) * xt;
      scores[i] = hx.norm();
    } else {
      scores[i] = xt.norm();
    }
  }
  return probs_from_scores(scores, indicators, delta);
}

AliasTable::AliasTable(const ProbabilityVector& probs) {
  const Eigen::Index n = probs.size();
  accept_.assign(static_cast<std::size_t>(n), 0.0);
  alias_.assign(static_cast<std::size_t>(n), 0);

  std::vector<double> scaled(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> small, large;
  small.reserve(static_cast<std::size_t>(n));
  large.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    scaled[static_cast<std::size_t>(i)] = probs[i] * static_cast<double>(n);
    (scaled[static_cast<std::size_t>(i)] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const Eigen::Index s = small.back();
    const Eigen::Index l = large.back();
    small.pop_back();
    accept_[static_cast<std::size_t>(s)] = scaled[static_cast<std::size_t>(s)];
    alias_[static_cast<std::size_t>(s)] = l;
    scaled[static_cast<std::size_t>(l)] -=
        1.0 - scaled[static_cast<std::size_t>(s)];
    if (scaled[static_cast<std::size_t>(l)] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (Eigen::Index i : large) accept_[static_cast<std::size_t>(i)] = 1.0;
  for (Eigen::Index i : small) accept_[static_cast<std::size_t>(i)] = 1.0;
}

Eigen::Index AliasTable::sample(Rng& rng) const {
  const auto n = static_cast<std::uint64_t>(accept_.size());
  const auto k = static_cast<std::size_t>(rng.uniform_index(n));
  return rng.uniform01() < accept_[k] ? static_cast<Eigen::Index>(k)
                                      : alias_[k];
}

SubsampleDraw draw_with_replacement(const ProbabilityVector& probs,
                                    Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("draw_with_replacement: n must be >= 1");
  AliasTable table(probs);
  Rng rng(seed);
  SubsampleDraw draw;
  draw.seed = seed;
  draw.indices.reserve(static_cast<std::size_t>(n));
  draw.draw_probs.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index idx = table.sample(rng);
    draw.indices.push_back(idx);
    draw.draw_probs.push_back(probs[idx]);
  }
  return draw;
}

std::vector<WeightedInstance> ht_weights(const SubsampleDraw& draw,
                                         Eigen::Index dataset_size) {
  if (draw.indices.size() != draw.draw_probs.size())
    throw std::invalid_argument("ht_weights: malformed draw");
  std::vector<WeightedInstance> out;
  out.reserve(draw.indices.size());
  // (1/N)/pi == 1/(N pi); this form gives weight exactly 1.0 when pi came
  // from uniform_probs
  const double inv_n = 1.0 / static_cast<double>(dataset_size);
  for (std::size_t i = 0; i < draw.indices.size(); ++i) {
    const double w = inv_n / draw.draw_probs[i];
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("ht_weights: nonpositive draw probability");
    out.push_back({draw.indices[i], w});
  }
  return out;
}

void write_probs_csv(const ProbabilityVector& probs,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_probs_csv: cannot open " + path.string());
  out << "index,pi\n";
  char buf[40];
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", probs[i]);
    out << i << ',' << buf << '\n';
  }
}

}  // namespace leverage
