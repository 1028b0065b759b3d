#include <cstdio>
#include "leverage/datagen.hpp"
#include "leverage/pipeline.hpp"
using namespace leverage;
int main() {
  Dataset data = gen_scenario({Scenario::ImUniform, 100000, 8, 5});
  PilotEstimate pilot = pilot_fit(data, 500, 7);
  LeverageFit fit = leverage_fit(data, pilot, Method::A, 1000, 9);
  std::printf("lambda=%g\n", fit.lambda);
  return 0;
}
