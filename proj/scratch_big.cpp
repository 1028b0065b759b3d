// throwaway: full-sample fit timing at N=1e5, scenario-I-like data
#include <chrono>
#include <cstdio>
#include <vector>

#include "leverage/dataset.hpp"
#include "leverage/rng.hpp"
#include "leverage/svm.hpp"

using namespace leverage;
using clk = std::chrono::steady_clock;

int main(int argc, char** argv) {
  const int N = argc > 1 ? std::atoi(argv[1]) : 100000;
  const int p = 8;
  Rng rng(7);
  RowMatrixXd x(N, p);
  Eigen::VectorXd y(N);
  for (int i = 0; i < N; ++i) {
    const bool pos = rng.uniform01() < 0.8;
    y[i] = pos ? 1.0 : -1.0;
    for (int j = 0; j < p; ++j)
      x(i, j) = pos ? rng.uniform01() : 0.3 + rng.uniform01();
  }
  Dataset data(std::move(x), std::move(y));
  std::vector<WeightedInstance> inst = unit_instances(data);

  for (double lam : {1e-4, 1e-3, 1e-2}) {
    SolverConfig cfg;
    cfg.lambda = lam;
    cfg.tolerance = 1e-8;
    FitReport rpt;
    auto t0 = clk::now();
    Hyperplane b = weighted_svm_fit(data, inst, cfg, &rpt);
    double secs = std::chrono::duration<double>(clk::now() - t0).count();
    std::printf("N=%d lam=%g: %.2f s, epochs=%d, gap=%.1e, obj=%.8f, |b1|=%.4f acc=%.2f%%\n",
                N, lam, secs, rpt.epochs, rpt.duality_gap, rpt.final_objective,
                b.slope.norm(), accuracy_pct(b, data));
  }
  return 0;
}
