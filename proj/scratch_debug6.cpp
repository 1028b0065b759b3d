// throwaway: continuation stages one by one
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
  detail::SmoOptions warm;
  warm.tolerance = 1e-4;
  warm.max_epochs = 1000;
  for (double f : {900.0, 30.0}) {
    prob.lambda = lam * f;
    auto r = detail::smo_solve(prob, st, warm);
    std::printf("warm f=%5.0f: conv=%d epochs=%4d gap=%.2e kkt=%.2e obj=%.9f suma=%.3f\n",
                f, r.converged, r.epochs, r.rel_gap, r.kkt_violation,
                r.objective, st.a.sum());
  }
  prob.lambda = lam;
  detail::SmoOptions fin;
  fin.tolerance = 1e-8;
  fin.max_epochs = 20000;
  auto r = detail::smo_solve(prob, st, fin);
  std::printf("final      : conv=%d epochs=%4d gap=%.2e kkt=%.2e obj=%.12f suma=%.3f\n",
              r.converged, r.epochs, r.rel_gap, r.kkt_violation, r.objective,
              st.a.sum());
  return 0;
}
