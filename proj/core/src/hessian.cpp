#include "leverage/hessian.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace leverage {

namespace {

// linear-interpolation quantile on sorted data, position (n-1)q
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

double silverman_bandwidth(const Eigen::VectorXd& residuals) {
  const Eigen::Index n = residuals.size();
  if (n < 2)
    throw std::invalid_argument("silverman_bandwidth: need at least 2 residuals");

  const double mean = residuals.mean();
  const double var =
      (residuals.array() - mean).square().sum() / static_cast<double>(n - 1);
  const double sd = std::sqrt(var);

  std::vector<double> sorted(residuals.data(), residuals.data() + n);
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

  const double spread = std::min(sd, iqr / 1.34);
  const double n_factor = std::pow(static_cast<double>(n), -0.2);
  if (!(spread > 0.0)) return n_factor;
  return 0.9 * spread * n_factor;
}

HessianEstimate estimate_hessian(const Dataset& data, const SubsampleDraw& draw,
                                 const Hyperplane& beta0, double h) {
  if (!(h > 0.0))
    throw std::invalid_argument("estimate_hessian: bandwidth must be > 0");
  if (draw.indices.empty())
    throw std::invalid_argument("estimate_hessian: empty draw");
  const Eigen::Index p = data.dim();
  const double n0 = static_cast<double>(draw.indices.size());
  const double big_n = static_cast<double>(data.size());
  const double norm_const = 1.0 / (h * std::sqrt(2.0 * M_PI));

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p + 1, p + 1);
  Eigen::VectorXd xt(p + 1);
  for (std::size_t k = 0; k < draw.indices.size(); ++k) {
    const Eigen::Index idx = draw.indices[k];
    const double weight = 1.0 / (big_n * draw.draw_probs[k]);
    const double resid =
        1.0 - data.label(idx) * (beta0.intercept + beta0.slope.dot(data.row(idx)));
    const double kern = norm_const * std::exp(-resid * resid / (2.0 * h * h));
    xt[0] = 1.0;
    xt.tail(p) = data.row(idx).transpose();
    acc.selfadjointView<Eigen::Lower>().rankUpdate(xt, weight * kern / n0);
  }
  // mirror the lower triangle so the matrix equals its transpose exactly
  acc.triangularView<Eigen::StrictlyUpper>() =
      acc.triangularView<Eigen::StrictlyLower>().transpose();

  HessianEstimate est;
  est.matrix = std::move(acc);
  est.bandwidth = h;
  return est;
}

Eigen::MatrixXd regularized_inverse(HessianEstimate& H) {
  const Eigen::Index d = H.matrix.rows();
  if (d < 1 || H.matrix.cols() != d)
    throw std::invalid_argument("regularized_inverse: not square");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H.matrix,
                                                     Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  const double unit = H.matrix.trace() / static_cast<double>(d);

  constexpr double kLadder[] = {0.0, 1e-8, 1e-6, 1e-4, 1e-2, 1.0, 1e2, 1e4};
  for (double rung : kLadder) {
    const double eps = rung * unit;
    const double lo = lmin + eps;
    const double hi = lmax + eps;
    if (!(lo > 0.0) || hi / lo > 1e12) continue;
    Eigen::MatrixXd jittered = H.matrix;
    jittered.diagonal().array() += eps;
    Eigen::LLT<Eigen::MatrixXd> llt(jittered);
    if (llt.info() != Eigen::Success) continue;
    H.ridge_used = eps;
    return llt.solve(Eigen::MatrixXd::Identity(d, d));
  }
  throw std::runtime_error("regularized_inverse: degenerate Hessian");
}

}  // namespace leverage
