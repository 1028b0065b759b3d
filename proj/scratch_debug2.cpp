// throwaway: debug combined-fit convergence
#include <cstdio>

#include "leverage/datagen.hpp"
#include "leverage/pipeline.hpp"
#include "leverage/sampling.hpp"
#include "leverage/svm.hpp"
#include "leverage/tuning.hpp"

using namespace leverage;

int main() {
  Dataset data = gen_scenario({Scenario::ImUniform, 2000, 4, 123});
  PilotEstimate pilot = pilot_fit(data, 100, 77);
  const double delta = 0.01 / 2000.0;
  ProbabilityVector probs = optimal_probs(data, pilot.beta0, &pilot.hessian_inv,
                                          OptimalityCriterion::A, delta);
  std::printf("probs: min=%.3e max=%.3e\n", probs.probs().minCoeff(),
              probs.probs().maxCoeff());
  SubsampleDraw draw = draw_with_replacement(probs, 200, 99);
  std::vector<WeightedInstance> inst;
  for (auto idx : pilot.pilot_draw.indices) inst.push_back({idx, 1.0});
  double wmin = 1e300, wmax = 0;
  for (auto& wi : ht_weights(draw, data.size())) {
    inst.push_back(wi);
    wmin = std::min(wmin, wi.weight);
    wmax = std::max(wmax, wi.weight);
  }
  std::printf("drawn weights: min=%.4g max=%.4g m=%zu\n", wmin, wmax, inst.size());

  LambdaGrid grid = default_lambda_grid(300);
  for (double lam : grid.values) {
    SolverConfig cfg;
    cfg.lambda = lam;
    cfg.tolerance = 1e-8;
    cfg.max_epochs = 40000;
    try {
      FitReport rpt;
      (void)weighted_svm_fit(data, inst, cfg, &rpt);
      std::printf("lam=%10.3e ok epochs=%6d gap=%.2e obj=%.8f\n", lam,
                  rpt.epochs, rpt.duality_gap, rpt.final_objective);
    } catch (const SolverError& e) {
      std::printf("lam=%10.3e FAIL %s\n", lam, e.what());
    }
  }
  return 0;
}
