// throwaway: dissect the 8e-6 gap plateau on the pilot fit
#include <cstdio>

#include "leverage/datagen.hpp"
#include "leverage/pipeline.hpp"
#include "leverage/sampling.hpp"
#include "leverage/svm.hpp"
#include "smo_internal.hpp"

using namespace leverage;

int main() {
  Dataset data = gen_scenario({Scenario::ImUniform, 2000, 4, 123});
  SubsampleDraw pd = pilot_draw_only(data, 100, 77);
  std::vector<WeightedInstance> inst;
  for (auto idx : pd.indices) inst.push_back({idx, 1.0});

  const double lam = 0.000372759;
  detail::SmoProblem prob = detail::gather_problem(data, inst, lam);
  detail::SmoState st;
  detail::SmoOptions opt;
  opt.tolerance = 1e-8;
  opt.max_epochs = 200;
  auto res = detail::smo_solve(prob, st, opt);
  const Hyperplane smo{st.beta0, st.beta1};
  std::printf("smo:  conv=%d epochs=%d gap=%.3e kkt=%.3e obj=%.12f\n",
              res.converged, res.epochs, res.rel_gap, res.kkt_violation,
              res.objective);

  SolverConfig cfg;
  cfg.lambda = lam;
  Hyperplane ref = reference_solve(data, inst, cfg);
  const double obj_ref = svm_objective(data, inst, ref, lam);
  const double obj_smo = svm_objective(data, inst, smo, lam);
  std::printf("ipm:  obj=%.12f   smo-ipm=%.3e\n", obj_ref, obj_smo - obj_ref);

  // dual value breakdown
  const double dual = lam * (st.a.sum() - 0.5 * st.beta1.squaredNorm());
  std::printf("dual=%.12f  primal(best)=%.12f  true gap vs ipm=%.3e\n", dual,
              res.objective, obj_ref - dual);
  std::printf("sum a=%.6f  |b1|=%.6f\n", st.a.sum(), st.beta1.norm());
  return 0;
}
