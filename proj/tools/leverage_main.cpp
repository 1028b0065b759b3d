// Command line driver: simulation benchmarks, timing sweeps, real-data runs
// and principal-component projections for the subsampled linear SVM.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "leverage/experiment.hpp"
#include "leverage/svm.hpp"

namespace {

using namespace leverage;

struct CommonOpts {
  std::string scenario;
  std::string input;
  std::string label_col;
  double threshold = 10.0;
  bool threshold_set = false;
  long n_train = 10000;
  int p = 8;
  long n0 = 500;
  std::vector<long> n_list;
  int reps = 1;
  std::vector<std::string> criteria;
  std::uint64_t seed = 1;
  double delta_coef = 0.01;
  std::vector<double> lambda_grid;
  std::string gacv_scope = "combined";
  std::string out_dir = "out";
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_data_source) {
  if (with_data_source) {
    cmd->add_option("--scenario", o.scenario,
                    "Simulation scenario: I|II|III|IV or "
                    "imuniform|normmix|t3|t3mix");
    cmd->add_option("--input", o.input, "Labeled CSV file");
    cmd->add_option("--label-col", o.label_col, "Label/response column name");
    cmd->add_option("--threshold", o.threshold,
                    "Label = +1 when response > threshold")
        ->check([&o](const std::string&) {
          o.threshold_set = true;
          return std::string{};
        });
  }
  cmd->add_option("--N", o.n_train, "Training size (scenario mode)");
  cmd->add_option("--p", o.p, "Covariate dimension (scenario mode)");
  cmd->add_option("--n0", o.n0, "Pilot subsample size");
  cmd->add_option("--n", o.n_list, "Second-stage subsample size(s)");
  cmd->add_option("--reps", o.reps, "Replications");
  cmd->add_option("--criterion", o.criteria,
                  "Methods to run: A, L, UNIF, FULL (repeatable)");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--delta-coef", o.delta_coef,
                  "Probability floor coefficient; delta = coef/N");
  cmd->add_option("--lambda-grid", o.lambda_grid,
                  "Explicit penalty grid (default: 8 log-spaced, scaled)");
  cmd->add_option("--gacv-scope", o.gacv_scope,
                  "Tuning holdout scope: combined|drawn");
  cmd->add_option("--out", o.out_dir, "Output directory");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = hardware)");
}

ExperimentConfig to_config(const CommonOpts& o) {
  ExperimentConfig cfg;
  if (!o.scenario.empty()) cfg.scenario = scenario_from_string(o.scenario);
  if (!o.input.empty()) {
    cfg.input = o.input;
    cfg.label_column = o.label_col;
    if (o.threshold_set) cfg.threshold = o.threshold;
  }
  cfg.n_train = o.n_train;
  cfg.p = o.p;
  cfg.n0 = o.n0;
  if (!o.n_list.empty()) {
    cfg.n_list.clear();
    for (long n : o.n_list) cfg.n_list.push_back(n);
  }
  cfg.replications = o.reps;
  if (!o.criteria.empty()) {
    cfg.methods.clear();
    for (const std::string& c : o.criteria)
      cfg.methods.push_back(harness_method_from_string(c));
  }
  cfg.seed = o.seed;
  cfg.delta_coef = o.delta_coef;
  cfg.lambda_grid = o.lambda_grid;
  cfg.gacv_scope =
      o.gacv_scope == "drawn" ? GacvScope::DrawnOnly : GacvScope::Combined;
  cfg.out_dir = o.out_dir;
  cfg.threads = o.threads;
  return cfg;
}

void print_summary(const std::vector<SummaryRow>& rows) {
  std::printf("%-10s %-9s %6s %6s %5s  %-12s %-9s\n", "scenario", "method",
              "n", "n0", "ok", "mean_mse", "mean_acc%");
  for (const SummaryRow& s : rows)
    std::printf("%-10s %-9s %6ld %6ld %5d  %-12.6g %-9.3f\n",
                s.scenario.c_str(), s.method.c_str(),
                static_cast<long>(s.n), static_cast<long>(s.n0), s.reps_ok,
                s.mean_mse, s.mean_accuracy_pct);
}

int cmd_simulate(const CommonOpts& o) {
  ExperimentConfig cfg = to_config(o);
  const auto results = run_simulation(cfg);
  print_summary(summarize(results));
  std::printf("results: %s\n", (cfg.out_dir / "results.csv").string().c_str());
  return 0;
}

int cmd_real(const CommonOpts& o) {
  if (o.input.empty()) throw CLI::ValidationError("real", "--input is required");
  if (o.label_col.empty())
    throw CLI::ValidationError("real", "--label-col is required");
  ExperimentConfig cfg = to_config(o);
  cfg.scenario.reset();
  const auto results = run_simulation(cfg);
  print_summary(summarize(results));
  std::printf("results: %s\n", (cfg.out_dir / "results.csv").string().c_str());
  return 0;
}

int cmd_timing(const CommonOpts& o, const std::vector<long>& n_full,
               int repeats) {
  ExperimentConfig cfg = to_config(o);
  std::vector<Eigen::Index> list(n_full.begin(), n_full.end());
  const TimingReport report = run_timing(cfg, list, repeats);
  std::printf("%10s %-9s %12s\n", "N", "method", "seconds");
  for (const TimingRow& r : report.rows)
    std::printf("%10ld %-9s %12.4f\n", static_cast<long>(r.n_full),
                r.method.c_str(), r.seconds);
  std::printf("full/LC-L ratios:");
  for (double v : report.full_over_lcl) std::printf(" %.3f", v);
  std::printf("\nfull-time strictly increasing: %s\n",
              report.full_time_increasing ? "yes" : "no");
  std::printf("ratio strictly increasing:     %s\n",
              report.ratio_increasing ? "yes" : "no");
  return report.full_time_increasing && report.ratio_increasing ? 0 : 2;
}

int cmd_project(const CommonOpts& o, const std::string& out_file) {
  ExperimentConfig cfg = to_config(o);
  Dataset data;
  if (cfg.scenario) {
    data = gen_scenario({*cfg.scenario, cfg.n_train, cfg.p,
                         derive_seed(cfg.seed, 0xDA7A, 0)});
  } else if (cfg.input) {
    data = load_labeled_csv(*cfg.input, cfg.label_column, cfg.threshold).data;
  } else {
    throw CLI::ValidationError("project", "need --scenario or --input");
  }

  std::vector<std::pair<std::string, Hyperplane>> classifiers;
  if (!o.criteria.empty()) {
    PipelineOptions pipe;
    pipe.delta_coef = cfg.delta_coef;
    pipe.solver = cfg.solver;
    std::optional<PilotEstimate> pilot;
    const Eigen::Index n = cfg.n_list.front();
    for (const std::string& c : o.criteria) {
      const HarnessMethod m = harness_method_from_string(c);
      if (m == HarnessMethod::Full) {
        SolverConfig solver = cfg.solver;
        LambdaGrid grid = default_lambda_grid(data.size());
        const SubsampleDraw sub = draw_with_replacement(
            uniform_probs(data.size()), std::min<Eigen::Index>(2000, data.size()),
            derive_seed(cfg.seed, 0x7D4E));
        std::vector<WeightedInstance> inst;
        for (Eigen::Index idx : sub.indices) inst.push_back({idx, 1.0});
        solver.lambda = select_lambda(data, inst, grid, solver);
        classifiers.emplace_back("SVM-FULL",
                                 weighted_svm_fit(data, unit_instances(data), solver));
        continue;
      }
      if (!pilot)
        pilot = pilot_fit(data, cfg.n0, derive_seed(cfg.seed, 0x9107), nullptr, pipe);
      const Method method = m == HarnessMethod::A   ? Method::A
                            : m == HarnessMethod::L ? Method::L
                                                    : Method::Unif;
      const LeverageFit fit = leverage_fit(
          data, *pilot, method, n, derive_seed(cfg.seed, 0xD4A3), nullptr, pipe);
      classifiers.emplace_back(to_string(method), fit.beta);
    }
  }
  emit_projection(data, classifiers, out_file);
  std::printf("projection: %s (%ld rows)\n", out_file.c_str(),
              static_cast<long>(data.size()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-step subsampled linear SVM benchmark harness"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value file");

  CommonOpts o;
  std::vector<long> n_full;
  int repeats = 5;
  std::string out_file = "projection.csv";

  CLI::App* simulate = app.add_subcommand("simulate", "Run scenario replications");
  add_common(simulate, o, true);

  CLI::App* timing = app.add_subcommand("timing", "Time methods across N");
  add_common(timing, o, true);
  timing->add_option("--N-list", n_full, "Training sizes to sweep")->required();
  timing->add_option("--repeats", repeats, "Timing repeats (best-of)");

  CLI::App* real = app.add_subcommand("real", "Run on a labeled CSV");
  add_common(real, o, true);

  CLI::App* project = app.add_subcommand("project", "Emit PCA projection CSV");
  add_common(project, o, true);
  project->add_option("--out-file", out_file, "Projection CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(o);
    if (timing->parsed()) return cmd_timing(o, n_full, repeats);
    if (real->parsed()) return cmd_real(o);
    if (project->parsed()) return cmd_project(o, out_file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
