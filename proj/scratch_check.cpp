// throwaway: solver vs oracle smoke check
#include <cstdio>
#include <vector>

#include "leverage/dataset.hpp"
#include "leverage/rng.hpp"
#include "leverage/svm.hpp"

using namespace leverage;

int main() {
  Rng rng(42);
  int worst_case = -1;
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const int m = 20 + static_cast<int>(rng.uniform_index(180));
    const int p = 1 + static_cast<int>(rng.uniform_index(5));
    RowMatrixXd x(m, p);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) {
      y[i] = rng.uniform01() < 0.5 ? 1.0 : -1.0;
      for (int j = 0; j < p; ++j) x(i, j) = rng.normal() + 0.7 * y[i];
    }
    Dataset data(x, y);
    std::vector<WeightedInstance> inst;
    for (int i = 0; i < m; ++i)
      inst.push_back({i, rep % 2 == 0 ? 1.0 : 0.1 + 5.0 * rng.uniform01()});
    SolverConfig cfg;
    const double lams[3] = {0.01, 0.1, 1.0};
    cfg.lambda = lams[rep % 3];
    cfg.tolerance = 1e-9;
    FitReport rpt;
    Hyperplane fast = weighted_svm_fit(data, inst, cfg, &rpt);
    Hyperplane slow = reference_solve(data, inst, cfg);
    const double of = svm_objective(data, inst, fast, cfg.lambda);
    const double os = svm_objective(data, inst, slow, cfg.lambda);
    const double rel = std::abs(of - os) / (1.0 + std::abs(os));
    if (rel > worst) { worst = rel; worst_case = rep; }
    std::printf("rep %2d m=%3d p=%d lam=%.2f obj_smo=%.10f obj_ipm=%.10f rel=%.2e epochs=%d gap=%.1e\n",
                rep, m, p, cfg.lambda, of, os, rel, rpt.epochs, rpt.duality_gap);
    // monotone trace check
    for (size_t k = 1; k < rpt.objective_trace.size(); ++k)
      if (rpt.objective_trace[k] > rpt.objective_trace[k - 1] + 1e-12)
        std::printf("  TRACE NOT MONOTONE at %zu\n", k);
  }
  std::printf("worst rel diff: %.3e (rep %d)\n", worst, worst_case);

  // symmetric pair: expect (0, 1)
  RowMatrixXd x(2, 1);
  x << -1.0, 1.0;
  Eigen::VectorXd y(2);
  y << -1.0, 1.0;
  Dataset pairdata(x, y);
  
  std::vector<WeightedInstance> wi{{0, 1.0}, {1, 1.0}};
  SolverConfig cfg;
  cfg.lambda = 0.1;
  cfg.tolerance = 1e-10;
  Hyperplane b = weighted_svm_fit(pairdata, wi, cfg);
  std::printf("pair: b0=%.12f b1=%.12f\n", b.intercept, b.slope[0]);
  Hyperplane br = reference_solve(pairdata, wi, cfg);
  std::printf("ipm : b0=%.12f b1=%.12f\n", br.intercept, br.slope[0]);
  return 0;
}
