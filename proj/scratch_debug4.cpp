// throwaway: reproduce the stalled fit with epoch diagnostics
#include <cstdio>

#include "leverage/datagen.hpp"
#include "leverage/pipeline.hpp"
#include "leverage/sampling.hpp"
#include "leverage/svm.hpp"
#include "smo_internal.hpp"

using namespace leverage;

int main() {
  Dataset data = gen_scenario({Scenario::ImUniform, 2000, 4, 123});
  PilotEstimate pilot = pilot_fit(data, 100, 77);
  std::printf("pilot done lambda0=%g\n", pilot.lambda0);
  const double delta = 0.01 / 2000.0;
  ProbabilityVector probs = optimal_probs(data, pilot.beta0, &pilot.hessian_inv,
                                          OptimalityCriterion::A, delta);
  SubsampleDraw draw = draw_with_replacement(probs, 200, 99);
  std::vector<WeightedInstance> inst;
  for (auto idx : pilot.pilot_draw.indices) inst.push_back({idx, 1.0});
  for (auto& wi : ht_weights(draw, data.size())) inst.push_back(wi);

  for (double lam : {1.1147e-3, 5.774e-8}) {
    detail::SmoProblem prob = detail::gather_problem(data, inst, lam);
    detail::SmoState st;
    detail::SmoOptions opt;
    opt.tolerance = 1e-8;
    opt.max_epochs = 20000;
    auto res = detail::smo_solve(prob, st, opt);
    std::printf("lam=%g direct: epochs=%d conv=%d gap=%.3e kkt=%.3e obj=%.8f\n",
                lam, res.epochs, res.converged, res.rel_gap, res.kkt_violation,
                res.objective);
  }
  return 0;
}
