#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "leverage/svm.hpp"

// Primal-dual interior-point solver for the slack reformulation
//
//   minimize   (1/m) sum_i w_i xi_i + (lambda/2) |b1|^2
//   subject to y_i (b0 + x_i . b1) + xi_i >= 1,   xi_i >= 0.
//
// A Mehrotra predictor-corrector iteration is run on the KKT system; the
// diagonal xi block is eliminated analytically, so each step reduces to a
// (p+1) x (p+1) solve. This path shares nothing with the working-set dual
// solver and serves as its test oracle at desk scale.

namespace leverage {

namespace {

struct IpmWork {
  Eigen::VectorXd z;   // (b0, b1, xi)
  Eigen::VectorXd s;   // slacks of the 2m inequality rows
  Eigen::VectorXd mu;  // multipliers
};

}  // namespace

Hyperplane reference_solve(const Dataset& data,
                           std::span<const WeightedInstance> instances,
                           const SolverConfig& config) {
  const Eigen::Index m = static_cast<Eigen::Index>(instances.size());
  if (m == 0) throw std::invalid_argument("reference_solve: no instances");
  if (m > 500)
    throw std::invalid_argument("reference_solve: desk scale only (m <= 500)");
  if (!(config.lambda > 0.0))
    throw std::invalid_argument("reference_solve: lambda must be > 0");

  const Eigen::Index p = data.dim();
  const Eigen::Index d = 1 + p;  // intercept + slope block
  const double mm = static_cast<double>(m);

  // gathered rows as augmented vectors z_i = (1, x_i)
  RowMatrixXd zrows(m, d);
  Eigen::VectorXd y(m), cw(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const WeightedInstance& inst = instances[static_cast<std::size_t>(i)];
    if (inst.index < 0 || inst.index >= data.size())
      throw std::invalid_argument("reference_solve: index out of range");
    if (!(inst.weight > 0.0))
      throw std::invalid_argument("reference_solve: nonpositive weight");
    zrows(i, 0) = 1.0;
    zrows.row(i).tail(p) = data.row(inst.index);
    y[i] = data.label(inst.index);
    cw[i] = inst.weight / mm;
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd xi = Eigen::VectorXd::Constant(m, 2.0);
  // slack rows: s1_i = y_i z_i.beta + xi_i - 1, s2_i = xi_i
  Eigen::VectorXd s1 = Eigen::VectorXd::Constant(m, 1.0);
  Eigen::VectorXd s2 = Eigen::VectorXd::Constant(m, 2.0);
  Eigen::VectorXd mu1 = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd mu2 = Eigen::VectorXd::Ones(m);

  Eigen::MatrixXd reduced(d, d);
  Eigen::VectorXd margins(m);

  const int max_iters = 80;
  for (int iter = 0; iter < max_iters; ++iter) {
    margins.noalias() = zrows * beta;

    // residuals
    // dual: for beta block: lambda*[0;b1] - sum_i mu1_i y_i z_i
    //       for xi block:   c_i - mu1_i - mu2_i
    Eigen::VectorXd rd_beta = Eigen::VectorXd::Zero(d);
    rd_beta.tail(p) = config.lambda * beta.tail(p);
    rd_beta.noalias() -= zrows.transpose() * (mu1.cwiseProduct(y));
    Eigen::VectorXd rd_xi = cw - mu1 - mu2;
    Eigen::VectorXd rp1 = y.cwiseProduct(margins) + xi -
                          Eigen::VectorXd::Ones(m) - s1;  // = 0 wanted
    Eigen::VectorXd rp2 = xi - s2;

    const double gap = (s1.dot(mu1) + s2.dot(mu2)) / (2.0 * mm);
    const double obj =
        cw.dot(xi) + 0.5 * config.lambda * beta.tail(p).squaredNorm();
    const double feas = std::max({rp1.lpNorm<Eigen::Infinity>(),
                                  rp2.lpNorm<Eigen::Infinity>(),
                                  rd_beta.lpNorm<Eigen::Infinity>(),
                                  rd_xi.lpNorm<Eigen::Infinity>()});
    if (feas <= 1e-10 * (1.0 + std::abs(obj)) &&
        gap <= 1e-11 * (1.0 + std::abs(obj)))
      break;

    const Eigen::VectorXd d1 = mu1.cwiseQuotient(s1);
    const Eigen::VectorXd d2 = mu2.cwiseQuotient(s2);
    const Eigen::VectorXd dsum = d1 + d2;

    // reduced normal matrix: lambda on the slope block plus
    // sum_i (d1_i d2_i / (d1_i + d2_i)) z_i z_i^T
    reduced.setZero();
    reduced.diagonal().tail(p).setConstant(config.lambda);
    Eigen::VectorXd coef = d1.cwiseProduct(d2).cwiseQuotient(dsum);
    reduced.selfadjointView<Eigen::Lower>().rankUpdate(
        zrows.transpose() * coef.cwiseSqrt().asDiagonal(), 1.0);
    reduced.diagonal().array() += 1e-13 * (1.0 + reduced.diagonal().maxCoeff());
    Eigen::LDLT<Eigen::MatrixXd> ldlt(
        reduced.selfadjointView<Eigen::Lower>());

    // one factorization serves the predictor and the corrector
    auto solve_step = [&](const Eigen::VectorXd& rc1, const Eigen::VectorXd& rc2,
                          Eigen::VectorXd& dbeta, Eigen::VectorXd& dxi,
                          Eigen::VectorXd& ds1, Eigen::VectorXd& ds2,
                          Eigen::VectorXd& dmu1, Eigen::VectorXd& dmu2) {
      // eliminate (dmu, ds), then fold the diagonal xi block into the
      // (p+1)-dimensional beta system
      const Eigen::VectorXd t1 = (rc1 + mu1.cwiseProduct(rp1)).cwiseQuotient(s1);
      const Eigen::VectorXd t2 = (rc2 + mu2.cwiseProduct(rp2)).cwiseQuotient(s2);
      // beta-block rhs and xi-block rhs of the condensed system
      Eigen::VectorXd rb = -rd_beta;
      rb.noalias() -= zrows.transpose() * (y.cwiseProduct(t1));
      Eigen::VectorXd rx = -rd_xi - t1 - t2;
      // fold xi out: dxi_i = (rx_i - d1_i y_i z_i.dbeta) / dsum_i
      Eigen::VectorXd fold = rx.cwiseQuotient(dsum);
      rb.noalias() -= zrows.transpose() *
                      (y.cwiseProduct(d1.cwiseProduct(fold)));
      dbeta = ldlt.solve(rb);
      const Eigen::VectorXd zb = zrows * dbeta;
      dxi = (rx - d1.cwiseProduct(y.cwiseProduct(zb))).cwiseQuotient(dsum);
      ds1 = y.cwiseProduct(zb) + dxi + rp1;
      ds2 = dxi + rp2;
      dmu1 = (-rc1 - mu1.cwiseProduct(ds1)).cwiseQuotient(s1);
      dmu2 = (-rc2 - mu2.cwiseProduct(ds2)).cwiseQuotient(s2);
    };

    auto max_step = [](const Eigen::VectorXd& x, const Eigen::VectorXd& dx) {
      double a = 1.0;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (dx[i] < 0.0) a = std::min(a, -x[i] / dx[i]);
      return a;
    };

    Eigen::VectorXd dbeta, dxi, ds1, ds2, dmu1, dmu2;
    // predictor
    Eigen::VectorXd rc1 = s1.cwiseProduct(mu1);
    Eigen::VectorXd rc2 = s2.cwiseProduct(mu2);
    solve_step(rc1, rc2, dbeta, dxi, ds1, ds2, dmu1, dmu2);
    const double ap = std::min(max_step(s1, ds1), max_step(s2, ds2));
    const double ad = std::min(max_step(mu1, dmu1), max_step(mu2, dmu2));
    const double a_aff = std::min(ap, ad);
    const double gap_aff = ((s1 + a_aff * ds1).dot(mu1 + a_aff * dmu1) +
                            (s2 + a_aff * ds2).dot(mu2 + a_aff * dmu2)) /
                           (2.0 * mm);
    const double sigma = std::pow(std::max(gap_aff, 0.0) / std::max(gap, 1e-300), 3.0);

    // corrector
    rc1 = s1.cwiseProduct(mu1) + ds1.cwiseProduct(dmu1) -
          Eigen::VectorXd::Constant(m, sigma * gap);
    rc2 = s2.cwiseProduct(mu2) + ds2.cwiseProduct(dmu2) -
          Eigen::VectorXd::Constant(m, sigma * gap);
    solve_step(rc1, rc2, dbeta, dxi, ds1, ds2, dmu1, dmu2);

    const double tau = 0.995;
    const double alpha_p =
        tau * std::min(max_step(s1, ds1), max_step(s2, ds2));
    const double alpha_d =
        tau * std::min(max_step(mu1, dmu1), max_step(mu2, dmu2));
    const double alpha = std::min({alpha_p, alpha_d, 1.0});

    beta += alpha * dbeta;
    xi += alpha * dxi;
    s1 += alpha * ds1;
    s2 += alpha * ds2;
    mu1 += alpha * dmu1;
    mu2 += alpha * dmu2;
  }

  Hyperplane out;
  out.intercept = beta[0];
  out.slope = beta.tail(p);
  return out;
}

}  // namespace leverage
