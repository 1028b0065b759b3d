// throwaway: time select_lambda and the end-to-end pipeline on typical sizes
#include <chrono>
#include <cstdio>

#include "leverage/datagen.hpp"
#include "leverage/experiment.hpp"
#include "leverage/pipeline.hpp"
#include "leverage/svm.hpp"

using namespace leverage;
using clk = std::chrono::steady_clock;

static double secs(clk::time_point t0) {
  return std::chrono::duration<double>(clk::now() - t0).count();
}

int main() {
  {
    Dataset data = gen_scenario({Scenario::ImUniform, 2000, 4, 123});
    auto t0 = clk::now();
    PilotEstimate pilot = pilot_fit(data, 100, 77);
    std::printf("pilot_fit(n0=100): %.3f s (lambda0=%g)\n", secs(t0), pilot.lambda0);
    t0 = clk::now();
    LeverageFit fit = leverage_fit(data, pilot, Method::A, 200, 99);
    std::printf("leverage_fit(A, n=200): %.3f s lambda=%g acc=%.2f\n", secs(t0),
                fit.lambda, accuracy_pct(fit.beta, data));
  }
  {
    Dataset data = gen_scenario({Scenario::ImUniform, 100000, 8, 5});
    auto t0 = clk::now();
    PilotEstimate pilot = pilot_fit(data, 500, 7);
    std::printf("pilot_fit(n0=500,N=1e5): %.3f s (lambda0=%g)\n", secs(t0),
                pilot.lambda0);
    t0 = clk::now();
    LeverageFit fit = leverage_fit(data, pilot, Method::A, 1000, 9);
    std::printf("leverage_fit(A, n=1000): %.3f s lambda=%g acc=%.2f\n", secs(t0),
                fit.lambda, accuracy_pct(fit.beta, data));
    t0 = clk::now();
    LeverageFit fitl = leverage_fit(data, pilot, Method::L, 1000, 9);
    std::printf("leverage_fit(L, n=1000): %.3f s acc=%.2f\n", secs(t0),
                accuracy_pct(fitl.beta, data));
    t0 = clk::now();
    LeverageFit fit2 = leverage_fit(data, pilot, Method::A, 2000, 9);
    std::printf("leverage_fit(A, n=2000): %.3f s\n", secs(t0));
    (void)fit2;
  }
  return 0;
}
