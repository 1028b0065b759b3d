#pragma once

#include "leverage/dataset.hpp"
#include "leverage/sampling.hpp"

namespace leverage {

/// Kernel-smoothed Hessian of the hinge objective at a pilot estimate,
/// symmetric positive semidefinite by construction.
struct HessianEstimate {
  Eigen::MatrixXd matrix;   // (p+1) x (p+1)
  double bandwidth = 0.0;
  double ridge_used = 0.0;  // absolute jitter added by regularized_inverse
};

/// Robust rule of thumb h = 0.9 min(sd, IQR/1.34) n^{-1/5}. Quantiles use
/// linear interpolation on order statistics (positions (n-1)q); the standard
/// deviation uses the n-1 divisor. A zero spread falls back to n^{-1/5}.
double silverman_bandwidth(const Eigen::VectorXd& residuals);

/// (1/n0) sum_i (1/(N pi_i)) K_h(1 - y_i f(x_i, beta0)) x~_i x~_i^T over the
/// pilot draw, with the Gaussian kernel K_h(t) = exp(-t^2/(2h^2))/(h sqrt(2 pi)).
HessianEstimate estimate_hessian(const Dataset& data, const SubsampleDraw& draw,
                                 const Hyperplane& beta0, double h);

/// (H + eps I)^{-1} by Cholesky, with eps the smallest rung of the ladder
/// {0, 1e-8, 1e-6, ...} x trace(H)/(p+1) that brings the condition number
/// under 1e12. The chosen absolute eps is recorded in H.ridge_used. Throws
/// "degenerate Hessian" when the whole ladder fails.
Eigen::MatrixXd regularized_inverse(HessianEstimate& H);

}  // namespace leverage
