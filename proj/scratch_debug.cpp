// throwaway: debug pilot/full failures
#include <cstdio>
#include <iostream>

#include "leverage/datagen.hpp"
#include "leverage/pipeline.hpp"
#include "leverage/svm.hpp"
#include "leverage/tuning.hpp"

using namespace leverage;

int main() {
  Dataset data = gen_scenario({Scenario::ImUniform, 2000, 4, 123});
  std::printf("data: N=%ld p=%ld pos=%ld\n", (long)data.size(), (long)data.dim(),
              (long)((data.labels().array() > 0).count()));
  try {
    PilotEstimate pilot = pilot_fit(data, 100, 77);
    std::printf("pilot ok: lambda0=%g b0=%g |b1|=%g ridge=%g h=%g\n",
                pilot.lambda0, pilot.beta0.intercept, pilot.beta0.slope.norm(),
                pilot.hessian.ridge_used, pilot.hessian.bandwidth);
    LeverageFit fit = leverage_fit(data, pilot, Method::A, 200, 99);
    std::printf("leverage ok: lambda=%g acc=%.2f\n", fit.lambda,
                accuracy_pct(fit.beta, data));
  } catch (const std::exception& e) {
    std::printf("pipeline FAILED: %s\n", e.what());
  }

  // isolate: grid fits at each lambda
  std::vector<WeightedInstance> inst;
  {
    auto draw = pilot_draw_only(data, 100, 77);
    for (auto idx : draw.indices) inst.push_back({idx, 1.0});
  }
  LambdaGrid grid = default_lambda_grid(100);
  for (double lam : grid.values) {
    SolverConfig cfg;
    cfg.lambda = lam;
    cfg.tolerance = 1e-8;
    try {
      FitReport rpt;
      Hyperplane b = weighted_svm_fit(data, inst, cfg, &rpt);
      std::printf("lam=%10.3e ok epochs=%5d gap=%.2e obj=%.8f |b1|=%g\n", lam,
                  rpt.epochs, rpt.duality_gap, rpt.final_objective, b.slope.norm());
    } catch (const SolverError& e) {
      std::printf("lam=%10.3e FAIL: %s\n", lam, e.what());
    }
  }
  return 0;
}
