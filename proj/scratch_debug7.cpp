// throwaway: pilot grid scores
#include <cstdio>
#include "leverage/datagen.hpp"
#include "leverage/pipeline.hpp"
#include "leverage/sampling.hpp"
#include "leverage/svm.hpp"
#include "leverage/tuning.hpp"

using namespace leverage;

int main() {
  Dataset data = gen_scenario({Scenario::ImUniform, 2000, 4, 123});
  SubsampleDraw pd = pilot_draw_only(data, 100, 77);
  std::vector<WeightedInstance> inst;
  for (auto idx : pd.indices) inst.push_back({idx, 1.0});
  SolverConfig cfg;
  LambdaGrid grid = default_lambda_grid(100);
  for (double lam : grid.values) {
    double s;
    try { s = gacv_score(data, inst, lam, cfg); }
    catch (const std::exception& e) { std::printf("lam=%.4e EXC %s\n", lam, e.what()); continue; }
    std::printf("lam=%.4e score=%.12f\n", lam, s);
  }
  const double sel = select_lambda(data, inst, grid, cfg);
  std::printf("selected: %.6e\n", sel);
  return 0;
}
