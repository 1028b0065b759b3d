#pragma once

// Internal dual solver for the weighted hinge + ridge objective. Not
// installed; tuning.cpp reuses it for warm-started leave-one-out refits.
//
// Primal:  P(b0, b1) = (1/m_eff) sum_i w_i [1 - y_i (b0 + x_i.b1)]_+
//                      + (lambda/2) |b1|^2   over included instances.
// Dual:    maximize  lambda * (sum_i a_i - |b1(a)|^2 / 2),
//          b1(a) = sum_i a_i y_i x_i,  0 <= a_i <= w_i/(lambda m_eff),
//          sum_i a_i y_i = 0.
// The unpenalized intercept is the multiplier of the equality constraint;
// pairwise coordinate ascent (SMO with maximal-violating-pair selection)
// keeps the constraint invariant. Convergence is decided on the relative
// primal-dual gap, with the intercept recovered by exact one-dimensional
// minimization, so the returned point carries its own optimality
// certificate. The best primal point seen is tracked and returned, which
// makes the reported objective sequence non-increasing.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "leverage/dataset.hpp"

namespace leverage::detail {

struct SmoProblem {
  RowMatrixXd x;       // m x p gathered instance rows
  Eigen::VectorXd y;   // +1 / -1
  Eigen::VectorXd w;   // positive weights
  double lambda = 0.0;
  double m_eff = 0.0;  // loss normalizer; m, or m-1 with one slot excluded
  std::vector<char> excluded;  // optional, size m; 1 drops the instance

  Eigen::Index m() const { return x.rows(); }
  Eigen::Index p() const { return x.cols(); }
  bool is_excluded(Eigen::Index i) const {
    return !excluded.empty() && excluded[static_cast<std::size_t>(i)];
  }
};

struct SmoState {
  Eigen::VectorXd a;      // dual variables, in [0, U]
  Eigen::VectorXd beta1;  // sum a_i y_i x_i, maintained incrementally
  double beta0 = 0.0;
};

struct SmoOptions {
  double tolerance = 1e-8;  // relative primal-dual gap
  int max_epochs = 10000;
  int working_set = 64;     // top violators kept per side
  int gap_check_every = 10; // epochs between unconditional gap evaluations
  // optional warm-start focus: selection is restricted to these indices
  // until their KKT conditions hold; the certificate is always global, and
  // a failed check widens the search to all coordinates
  const std::vector<Eigen::Index>* focus = nullptr;
};

struct SmoResult {
  double objective = 0.0;
  double rel_gap = std::numeric_limits<double>::infinity();
  double kkt_violation = std::numeric_limits<double>::infinity();
  int epochs = 0;
  bool converged = false;
};

/// Exact minimizer of the piecewise-linear intercept section
/// b -> sum_i c_i [d_i - y_i b]_+ given margins d_i = 1 - y_i x_i.b1.
/// Ties resolve to the midpoint of a bounded optimal interval and to the
/// finite endpoint of an unbounded one.
inline double exact_intercept(const SmoProblem& prob,
                              const Eigen::VectorXd& xb /* x_i . beta1 */) {
  struct Event {
    double pos;
    double jump;
  };
  std::vector<Event> events;
  events.reserve(static_cast<std::size_t>(prob.m()));
  double slope = 0.0;  // derivative of the loss as b -> -inf
  double total = 0.0;
  for (Eigen::Index i = 0; i < prob.m(); ++i) {
    if (prob.is_excluded(i)) continue;
    const double c = prob.w[i] / prob.m_eff;
    const double d = 1.0 - prob.y[i] * xb[i];
    if (prob.y[i] > 0) {
      slope -= c;
      events.push_back({d, c});
    } else {
      events.push_back({-d, c});
    }
    total += c;
  }
  if (events.empty()) return 0.0;
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.pos < b.pos; });
  const double eps = 1e-14 * total;
  if (slope >= -eps) return events.front().pos;  // no positive class
  for (std::size_t k = 0; k < events.size(); ++k) {
    slope += events[k].jump;
    if (slope > eps) return events[k].pos;  // strict crossing at this kink
    if (slope >= -eps) {
      // flat stretch: optimal on [pos_k, pos_{k+1}] or [pos_k, inf)
      if (k + 1 < events.size())
        return 0.5 * (events[k].pos + events[k + 1].pos);
      return events[k].pos;
    }
  }
  return events.back().pos;
}

/// Loss + penalty at (b0, beta1) given cached x.beta1 products.
inline double primal_value(const SmoProblem& prob, const Eigen::VectorXd& xb,
                           const Eigen::VectorXd& beta1, double b0) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < prob.m(); ++i) {
    if (prob.is_excluded(i)) continue;
    const double u = 1.0 - prob.y[i] * (b0 + xb[i]);
    if (u > 0.0) loss += prob.w[i] * u;
  }
  return loss / prob.m_eff + 0.5 * prob.lambda * beta1.squaredNorm();
}

class SmoSolver {
 public:
  SmoSolver(const SmoProblem& prob, SmoState& state, const SmoOptions& opt,
            std::vector<double>* trace = nullptr)
      : prob_(prob), st_(state), opt_(opt), trace_(trace) {
    const Eigen::Index m = prob_.m();
    cap_.resize(m);
    for (Eigen::Index i = 0; i < m; ++i)
      cap_[i] = prob_.is_excluded(i)
                    ? 0.0
                    : prob_.w[i] / (prob_.lambda * prob_.m_eff);
    xsq_ = prob_.x.rowwise().squaredNorm();
    if (st_.a.size() != m) {
      st_.a = Eigen::VectorXd::Zero(m);
      st_.beta1 = Eigen::VectorXd::Zero(prob_.p());
    } else {
      warm_started_ = true;
      for (Eigen::Index i = 0; i < m; ++i)
        st_.a[i] = std::clamp(st_.a[i], 0.0, cap_[i]);
      repair_constraint();
      st_.beta1 = prob_.x.transpose() * (st_.a.cwiseProduct(prob_.y));
    }
  }

  SmoResult solve() {
    SmoResult res;
    const Eigen::Index m = prob_.m();
    double eps_kkt = std::numeric_limits<double>::infinity();
    best_obj_ = std::numeric_limits<double>::infinity();
    best_beta1_ = st_.beta1;
    best_beta0_ = st_.beta0;
    bool focused = opt_.focus != nullptr && !opt_.focus->empty();

    Eigen::VectorXd xb(m), v(m);
    for (int epoch = 1; epoch <= opt_.max_epochs; ++epoch) {
      res.epochs = epoch;
      Eigen::Index iu = -1, il = -1;
      double lb = -std::numeric_limits<double>::infinity();
      double ub = std::numeric_limits<double>::infinity();
      if (focused) {
        for (Eigen::Index i : *opt_.focus) {
          v[i] = prob_.y[i] - prob_.x.row(i).dot(st_.beta1);
          if (can_raise(i) && v[i] > lb) { lb = v[i]; iu = i; }
          if (can_lower(i) && v[i] < ub) { ub = v[i]; il = i; }
        }
      } else {
        xb.noalias() = prob_.x * st_.beta1;
        v = prob_.y - xb;
        for (Eigen::Index i = 0; i < m; ++i) {
          if (can_raise(i) && v[i] > lb) { lb = v[i]; iu = i; }
          if (can_lower(i) && v[i] < ub) { ub = v[i]; il = i; }
        }
      }
      const double violation = lb - ub;
      res.kkt_violation = violation;
      if (epoch == 1 && std::isfinite(violation))
        eps_kkt = std::max(0.25 * violation, 1e-12);

      const bool kkt_done = !(violation > eps_kkt);
      bool at_floor = false;
      const bool check_now =
          (epoch == 1 && warm_started_) || kkt_done ||
          (!focused && (epoch % opt_.gap_check_every == 0 ||
                        epoch == opt_.max_epochs));
      if (check_now) {
        res.rel_gap = certified_gap();
        if (res.rel_gap <= opt_.tolerance) {
          res.converged = true;
          if (trace_) trace_->push_back(best_obj_);
          break;
        }
        if (focused && kkt_done) {
          focused = false;  // widen: the focus set was not enough
          continue;
        }
        // re-anchor the gate to the current violation so every failed check
        // forces real progress before the next one
        if (std::isfinite(violation))
          eps_kkt = std::max(0.25 * violation, 1e-16);
        at_floor = kkt_done && !(violation > 0);
      }

      if (violation > 0) {
        // one guaranteed maximal-violating-pair step, then working-set steps
        update_pair(iu, v[iu], il, v[il]);
        inner_updates(v, eps_kkt, focused ? opt_.focus : nullptr);
        rescale_duals();

        if (!focused) {
          // cheap incumbent refresh with the KKT-interval midpoint intercept
          const double b_mid = std::isfinite(lb) && std::isfinite(ub)
                                   ? 0.5 * (lb + ub)
                                   : best_beta0_;
          xb.noalias() = prob_.x * st_.beta1;
          const double p_now = primal_value(prob_, xb, st_.beta1, b_mid);
          if (p_now < best_obj_) {
            best_obj_ = p_now;
            best_beta1_ = st_.beta1;
            best_beta0_ = b_mid;
          }
        }
      }
      if (trace_) trace_->push_back(best_obj_);
      if (at_floor) break;
    }

    st_.beta1 = best_beta1_;
    st_.beta0 = best_beta0_;
    res.objective = best_obj_;
    return res;
  }

 private:
  // capacity floors keep near-bound coordinates out of the selection; they
  // admit only microscopic steps and would otherwise be picked forever
  bool can_raise(Eigen::Index i) const {
    const double floor = 1e-13 * cap_[i];
    return prob_.y[i] > 0 ? cap_[i] - st_.a[i] > floor : st_.a[i] > floor;
  }
  bool can_lower(Eigen::Index i) const {
    const double floor = 1e-13 * cap_[i];
    return prob_.y[i] > 0 ? st_.a[i] > floor : cap_[i] - st_.a[i] > floor;
  }

  /// Restores sum a_i y_i = 0 after warm starts or rounding drift. The
  /// surplus class is shrunk proportionally (a far better warm point than
  /// dumping the imbalance on a few coordinates), then a clamp pass removes
  /// the floating-point remainder.
  void repair_constraint() {
    double pos = 0.0, neg = 0.0;
    for (Eigen::Index i = 0; i < prob_.m(); ++i)
      (prob_.y[i] > 0 ? pos : neg) += st_.a[i];
    const double s = pos - neg;
    if (s > 0.0 && pos > 0.0) {
      const double f = neg / pos;
      for (Eigen::Index i = 0; i < prob_.m(); ++i)
        if (prob_.y[i] > 0) st_.a[i] *= f;
    } else if (s < 0.0 && neg > 0.0) {
      const double f = pos / neg;
      for (Eigen::Index i = 0; i < prob_.m(); ++i)
        if (prob_.y[i] < 0) st_.a[i] *= f;
    }
    double rem = 0.0;
    for (Eigen::Index i = 0; i < prob_.m(); ++i) rem += st_.a[i] * prob_.y[i];
    for (Eigen::Index i = 0; i < prob_.m() && rem != 0.0; ++i) {
      const double want = -rem * prob_.y[i];  // y_i d = -rem zeroes it
      const double d = std::clamp(want, -st_.a[i], cap_[i] - st_.a[i]);
      if (d != 0.0) {
        st_.a[i] += d;
        rem += prob_.y[i] * d;
      }
    }
  }

  /// Two-variable ascent step along the equality constraint; vi, vj are
  /// fresh margins y - x.beta1 of the pair. Returns the step length.
  double update_pair(Eigen::Index i, double vi, Eigen::Index j, double vj) {
    if (i < 0 || j < 0 || i == j) return 0.0;
    const double gain = vi - vj;
    if (!(gain > 0.0)) return 0.0;
    const double eta =
        xsq_[i] + xsq_[j] - 2.0 * prob_.x.row(i).dot(prob_.x.row(j));
    double t = eta > 1e-300 ? gain / eta : std::numeric_limits<double>::infinity();
    const double cap_i = prob_.y[i] > 0 ? cap_[i] - st_.a[i] : st_.a[i];
    const double cap_j = prob_.y[j] > 0 ? st_.a[j] : cap_[j] - st_.a[j];
    t = std::min({t, cap_i, cap_j});
    if (!(t > 0.0)) return 0.0;
    st_.a[i] = std::clamp(st_.a[i] + prob_.y[i] * t, 0.0, cap_[i]);
    st_.a[j] = std::clamp(st_.a[j] - prob_.y[j] * t, 0.0, cap_[j]);
    st_.beta1 += t * (prob_.x.row(i) - prob_.x.row(j)).transpose();
    return t;
  }

  /// Extra ascent steps between scans: the top violators of each side are
  /// sorted once, then walked greedily with margins recomputed fresh per
  /// pair, so staleness can only waste a pick, never produce a wrong step.
  /// A side advances when its cap bound the step; both advance when the
  /// pair reached its unconstrained optimum.
  void inner_updates(const Eigen::VectorXd& v_scan, double eps_kkt,
                     const std::vector<Eigen::Index>* focus = nullptr) {
    const Eigen::Index m = prob_.m();
    const Eigen::Index k =
        std::clamp<Eigen::Index>(m / 16, 16, opt_.working_set);
    up_.clear();
    dn_.clear();
    if (focus) {
      for (Eigen::Index i : *focus) {
        if (can_raise(i)) up_.push_back(i);
        if (can_lower(i)) dn_.push_back(i);
      }
    } else {
      for (Eigen::Index i = 0; i < m; ++i) {
        if (can_raise(i)) up_.push_back(i);
        if (can_lower(i)) dn_.push_back(i);
      }
    }
    auto shrink = [&](std::vector<Eigen::Index>& set, bool top) {
      auto cmp = [&](Eigen::Index a, Eigen::Index b) {
        return top ? v_scan[a] > v_scan[b] : v_scan[a] < v_scan[b];
      };
      if (static_cast<Eigen::Index>(set.size()) > k) {
        std::nth_element(set.begin(), set.begin() + k, set.end(), cmp);
        set.resize(static_cast<std::size_t>(k));
      }
      std::sort(set.begin(), set.end(), cmp);
    };
    shrink(up_, true);
    shrink(dn_, false);

    std::size_t ui = 0, di = 0;
    while (ui < up_.size() && di < dn_.size()) {
      const Eigen::Index i = up_[ui];
      const Eigen::Index j = dn_[di];
      if (!can_raise(i)) { ++ui; continue; }
      if (!can_lower(j) || j == i) { ++di; continue; }
      const double vi = prob_.y[i] - prob_.x.row(i).dot(st_.beta1);
      const double vj = prob_.y[j] - prob_.x.row(j).dot(st_.beta1);
      const double gain = vi - vj;
      if (gain <= 0.5 * eps_kkt) {
        // stale candidate; drop whichever side regressed more
        if (vi < v_scan[i] - 0.25 * (v_scan[i] - v_scan[j])) ++ui; else ++di;
        continue;
      }
      const double eta =
          xsq_[i] + xsq_[j] - 2.0 * prob_.x.row(i).dot(prob_.x.row(j));
      const double t_free =
          eta > 1e-300 ? gain / eta : std::numeric_limits<double>::infinity();
      const double cap_i = prob_.y[i] > 0 ? cap_[i] - st_.a[i] : st_.a[i];
      const double cap_j = prob_.y[j] > 0 ? st_.a[j] : cap_[j] - st_.a[j];
      const double t = std::min({t_free, cap_i, cap_j});
      if (!(t > 0.0)) { ++ui; ++di; continue; }
      st_.a[i] = std::clamp(st_.a[i] + prob_.y[i] * t, 0.0, cap_[i]);
      st_.a[j] = std::clamp(st_.a[j] - prob_.y[j] * t, 0.0, cap_[j]);
      st_.beta1 += t * (prob_.x.row(i) - prob_.x.row(j)).transpose();
      if (t == t_free) {
        ++ui;
        ++di;
      } else {
        if (t == cap_i) ++ui;
        if (t == cap_j) ++di;
      }
    }

    // a few second-order picks (best gain^2/curvature partner, fresh
    // margins) equilibrate the at-margin coordinates the walk leaves behind
    for (int pick = 0; pick < 8; ++pick) {
      Eigen::Index bi = -1;
      double lb = -std::numeric_limits<double>::infinity();
      for (Eigen::Index i : up_) {
        if (!can_raise(i)) continue;
        const double vi = prob_.y[i] - prob_.x.row(i).dot(st_.beta1);
        if (vi > lb) { lb = vi; bi = i; }
      }
      if (bi < 0) break;
      Eigen::Index bj = -1;
      double best_score = 0.0, bj_v = 0.0;
      double ub = std::numeric_limits<double>::infinity();
      for (Eigen::Index j : dn_) {
        if (!can_lower(j) || j == bi) continue;
        const double vj = prob_.y[j] - prob_.x.row(j).dot(st_.beta1);
        ub = std::min(ub, vj);
        const double gain = lb - vj;
        if (gain <= 0.0) continue;
        const double eta = std::max(
            xsq_[bi] + xsq_[j] - 2.0 * prob_.x.row(bi).dot(prob_.x.row(j)),
            1e-12);
        if (gain * gain / eta > best_score) {
          best_score = gain * gain / eta;
          bj = j;
          bj_v = vj;
        }
      }
      if (bj < 0 || lb - ub <= 0.5 * eps_kkt) break;
      if (update_pair(bi, lb, bj, bj_v) == 0.0) break;
    }
  }

  /// Exact line search along the ray c*a: the dual value c sum(a) -
  /// c^2 |beta1|^2 / 2 is maximized subject to the boxes. Pair steps change
  /// the duals additively, so when the caps are huge (tiny lambda) this
  /// multiplicative move recovers the right magnitude in one shot. The
  /// equality constraint scales with c and stays exact.
  void rescale_duals() {
    const double bsq = st_.beta1.squaredNorm();
    const double asum = st_.a.sum();
    if (!(bsq > 0.0) || !(asum > 0.0)) return;
    double cmax = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < prob_.m(); ++i)
      if (st_.a[i] > 0.0) cmax = std::min(cmax, cap_[i] / st_.a[i]);
    const double c = std::min(asum / bsq, cmax);
    if (!(c > 0.0) || std::abs(c - 1.0) < 1e-12) return;
    st_.a *= c;
    st_.beta1 *= c;
  }

  /// Certificate: repairs the constraint, recomputes beta1 from the duals,
  /// and returns the relative primal-dual gap for the incumbent. Any
  /// intercept yields a valid primal upper bound, so the KKT-interval
  /// midpoint is tried first and the exact piecewise-linear minimizer (a
  /// sort) is only computed when the cheap bound is marginal.
  double certified_gap() {
    repair_constraint();
    st_.beta1 = prob_.x.transpose() * (st_.a.cwiseProduct(prob_.y));
    Eigen::VectorXd xb = prob_.x * st_.beta1;
    const double dual =
        prob_.lambda * (st_.a.sum() - 0.5 * st_.beta1.squaredNorm());

    double lb = -std::numeric_limits<double>::infinity();
    double ub = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < prob_.m(); ++i) {
      const double vi = prob_.y[i] - xb[i];
      if (can_raise(i) && vi > lb) lb = vi;
      if (can_lower(i) && vi < ub) ub = vi;
    }
    auto consider = [&](double b0) {
      const double p_val = primal_value(prob_, xb, st_.beta1, b0);
      if (p_val < best_obj_) {
        best_obj_ = p_val;
        best_beta1_ = st_.beta1;
        best_beta0_ = b0;
      }
      return (best_obj_ - dual) / (1.0 + std::abs(best_obj_));
    };
    if (std::isfinite(lb) && std::isfinite(ub)) {
      const double rel = consider(0.5 * (lb + ub));
      if (rel <= opt_.tolerance || rel > 8.0 * opt_.tolerance) return rel;
    }
    return consider(exact_intercept(prob_, xb));
  }

  const SmoProblem& prob_;
  SmoState& st_;
  SmoOptions opt_;
  std::vector<double>* trace_;
  bool warm_started_ = false;
  Eigen::VectorXd cap_;
  Eigen::VectorXd xsq_;
  std::vector<Eigen::Index> up_, dn_;
  double best_obj_ = 0.0;
  Eigen::VectorXd best_beta1_;
  double best_beta0_ = 0.0;
};

inline SmoResult smo_solve(const SmoProblem& prob, SmoState& state,
                           const SmoOptions& opt,
                           std::vector<double>* trace = nullptr) {
  return SmoSolver(prob, state, opt, trace).solve();
}

/// Gathers instance rows into a dense solver problem.
inline SmoProblem gather_problem(const Dataset& data,
                                 std::span<const WeightedInstance> instances,
                                 double lambda) {
  SmoProblem prob;
  const Eigen::Index m = static_cast<Eigen::Index>(instances.size());
  prob.x.resize(m, data.dim());
  prob.y.resize(m);
  prob.w.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const WeightedInstance& inst = instances[static_cast<std::size_t>(i)];
    if (inst.index < 0 || inst.index >= data.size())
      throw std::invalid_argument("instance index out of range");
    if (!(inst.weight > 0.0) || !std::isfinite(inst.weight))
      throw std::invalid_argument("instance weight must be positive and finite");
    prob.x.row(i) = data.row(inst.index);
    prob.y[i] = data.label(inst.index);
    prob.w[i] = inst.weight;
  }
  prob.lambda = lambda;
  prob.m_eff = static_cast<double>(m);
  return prob;
}

}  // namespace leverage::detail
