#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "leverage/csv.hpp"
#include "leverage/datagen.hpp"
#include "leverage/pipeline.hpp"

namespace leverage {

/// Methods the harness compares. Full is the whole-training-set reference.
enum class HarnessMethod { A, L, Unif, Full };

std::string to_string(HarnessMethod m);
HarnessMethod harness_method_from_string(const std::string& name);

struct ExperimentConfig {
  // data source: a simulation scenario or a labeled CSV
  std::optional<Scenario> scenario;
  std::optional<std::filesystem::path> input;
  std::string label_column;
  std::optional<double> threshold;

  Eigen::Index n_train = 10000;  // N (scenario mode; CSV mode splits 50/50)
  int p = 8;
  Eigen::Index n0 = 500;
  std::vector<Eigen::Index> n_list{1000};
  int replications = 1;
  std::vector<HarnessMethod> methods{HarnessMethod::A, HarnessMethod::L,
                                     HarnessMethod::Unif, HarnessMethod::Full};
  std::uint64_t seed = 1;
  double delta_coef = 0.01;          // floor delta = delta_coef / N
  std::vector<double> lambda_grid;   // empty: default grid per fit size
  GacvScope gacv_scope = GacvScope::Combined;
  SolverConfig solver;
  std::filesystem::path out_dir = "out";
  int threads = 0;                   // 0: hardware concurrency
  bool write_files = true;
  Eigen::Index tuning_subsample = 2000;  // GACV size for the full-sample fit
};

/// One (method, n, replication) cell.
struct ExperimentResult {
  std::string scenario;   // scenario name or input stem
  std::string method;
  Eigen::Index n = 0;
  Eigen::Index n0 = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  double mse = std::numeric_limits<double>::quiet_NaN();
  double accuracy_pct = std::numeric_limits<double>::quiet_NaN();
  double t_pilot_s = 0.0;
  double t_probs_s = 0.0;
  double t_draw_s = 0.0;
  double t_fit_s = 0.0;
  int error_code = 0;  // 0 ok, 1 data, 2 pilot, 3 fit, 4 other
};

struct SummaryRow {
  std::string scenario;
  std::string method;
  Eigen::Index n = 0;
  Eigen::Index n0 = 0;
  int reps_ok = 0;
  int reps_failed = 0;
  double mean_mse = std::numeric_limits<double>::quiet_NaN();
  double mean_accuracy_pct = std::numeric_limits<double>::quiet_NaN();
  double mean_t_pilot_s = 0.0;
  double mean_t_probs_s = 0.0;
  double mean_t_draw_s = 0.0;
  double mean_t_fit_s = 0.0;
};

/// Per replication: draw train/test data, fit the full-sample reference
/// (disk-cached), run every (method, n) cell, and record MSE against the
/// reference, test accuracy and phase times. A failing cell is recorded with
/// its error code and never aborts the run. Emits results.csv and
/// summary.csv under out_dir when write_files is set. Row order and all
/// non-timing fields are deterministic for a fixed config.
std::vector<ExperimentResult> run_simulation(const ExperimentConfig& config);

std::vector<SummaryRow> summarize(const std::vector<ExperimentResult>& results);

void write_results_csv(const std::vector<ExperimentResult>& results,
                       const std::filesystem::path& path);
std::vector<ExperimentResult> read_results_csv(const std::filesystem::path& path);
void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::filesystem::path& path);

struct TimingRow {
  Eigen::Index n_full = 0;  // training size N
  std::string method;
  double seconds = 0.0;
};

struct TimingReport {
  std::vector<TimingRow> rows;
  std::vector<double> full_over_lcl;  // ratio per N, in N order
  bool full_time_increasing = false;
  bool ratio_increasing = false;
};

/// One dataset per N; every method timed on it (best of `repeats` runs with
/// identical seeds). The full-sample method times the final fit, with its
/// penalty tuned beforehand; the leverage methods time their complete
/// pipelines (pilot, probabilities, draw, tuning, fit). Emits timing.csv.
TimingReport run_timing(const ExperimentConfig& config,
                        const std::vector<Eigen::Index>& n_full_list,
                        int repeats = 5);

/// Writes the first two principal-component coordinates of the features,
/// the labels, and one decision-value column per supplied classifier.
void emit_projection(
    const Dataset& data,
    const std::vector<std::pair<std::string, Hyperplane>>& classifiers,
    const std::filesystem::path& path);

/// Runs fn(0..jobs-1) on a small worker pool; fn must be thread-safe.
void parallel_for_jobs(int jobs, int threads, const std::function<void(int)>& fn);

/// Seeded 50/50 split (first half train, rest test after a seeded shuffle).
std::pair<Dataset, Dataset> split_half(const Dataset& data, std::uint64_t seed);

}  // namespace leverage
