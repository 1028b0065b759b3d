#include "leverage/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "leverage/svm.hpp"

namespace leverage {

namespace {

using clock_type = std::chrono::steady_clock;
using nlohmann::json;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

constexpr std::uint64_t kDataTag = 0xDA7A;
constexpr std::uint64_t kTestTag = 0x7E57;
constexpr std::uint64_t kPilotTag = 0x9107;
constexpr std::uint64_t kDrawTag = 0xD4A3;
constexpr std::uint64_t kTuneTag = 0x7D4E;
constexpr std::uint64_t kSplitTag = 0x5917;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

struct FullFitRef {
  Hyperplane beta;
  double lambda = 0.0;
  double fit_seconds = 0.0;
  bool from_cache = false;
};

LambdaGrid grid_for(const ExperimentConfig& cfg, Eigen::Index fit_size) {
  if (cfg.lambda_grid.empty()) return default_lambda_grid(fit_size);
  LambdaGrid g{cfg.lambda_grid};
  validate(g);
  return g;
}

std::string grid_tag(const ExperimentConfig& cfg) {
  if (cfg.lambda_grid.empty()) return "default";
  std::ostringstream os;
  for (double v : cfg.lambda_grid) os << format_double(v) << ';';
  return os.str();
}

/// Full-sample reference: penalty tuned by unweighted leave-one-out scoring
/// on a uniform subsample (full-sample LOO being infeasible), then one fit
/// over all training rows. Cached on disk keyed by the config hash.
FullFitRef full_reference(const Dataset& train, const ExperimentConfig& cfg,
                          const std::string& source_tag,
                          std::uint64_t data_seed) {
  std::ostringstream key;
  key << "full|v1|" << source_tag << "|N=" << train.size() << "|p="
      << train.dim() << "|seed=" << data_seed << "|tol="
      << format_double(cfg.solver.tolerance) << "|grid=" << grid_tag(cfg)
      << "|sub=" << cfg.tuning_subsample;
  const std::string key_str = key.str();

  std::filesystem::path cache_file;
  if (cfg.write_files) {
    char name[64];
    std::snprintf(name, sizeof(name), "full_%016llx.json",
                  static_cast<unsigned long long>(fnv1a(key_str)));
    cache_file = cfg.out_dir / "cache" / name;
    std::ifstream in(cache_file);
    if (in) {
      try {
        json j = json::parse(in);
        if (j.at("key").get<std::string>() == key_str) {
          FullFitRef ref;
          ref.lambda = j.at("lambda").get<double>();
          ref.beta.intercept = j.at("intercept").get<double>();
          const auto slope = j.at("slope").get<std::vector<double>>();
          ref.beta.slope =
              Eigen::Map<const Eigen::VectorXd>(slope.data(), slope.size());
          ref.from_cache = true;
          return ref;
        }
      } catch (const std::exception&) {
        // unreadable cache entry: refit
      }
    }
  }

  const Eigen::Index sub_n = std::min(cfg.tuning_subsample, train.size());
  const SubsampleDraw sub = draw_with_replacement(
      uniform_probs(train.size()), sub_n, derive_seed(data_seed, kTuneTag));
  std::vector<WeightedInstance> sub_inst;
  sub_inst.reserve(sub.indices.size());
  for (Eigen::Index idx : sub.indices) sub_inst.push_back({idx, 1.0});

  const LambdaGrid grid = grid_for(cfg, train.size());
  SolverConfig solver = cfg.solver;
  solver.lambda = select_lambda(train, sub_inst, grid, solver);

  FullFitRef ref;
  ref.lambda = solver.lambda;
  const auto t0 = clock_type::now();
  ref.beta = weighted_svm_fit(train, unit_instances(train), solver);
  ref.fit_seconds = seconds_since(t0);

  if (cfg.write_files) {
    json j;
    j["key"] = key_str;
    j["lambda"] = ref.lambda;
    j["intercept"] = ref.beta.intercept;
    j["slope"] = std::vector<double>(ref.beta.slope.data(),
                                     ref.beta.slope.data() + ref.beta.slope.size());
    std::filesystem::create_directories(cache_file.parent_path());
    std::ofstream out(cache_file);
    out << j.dump(1) << '\n';
  }
  return ref;
}

}  // namespace

std::string to_string(HarnessMethod m) {
  switch (m) {
    case HarnessMethod::A: return "LC-A";
    case HarnessMethod::L: return "LC-L";
    case HarnessMethod::Unif: return "LC-UNIF";
    case HarnessMethod::Full: return "SVM-FULL";
  }
  return "?";
}

HarnessMethod harness_method_from_string(const std::string& name) {
  if (name == "A" || name == "LC-A") return HarnessMethod::A;
  if (name == "L" || name == "LC-L") return HarnessMethod::L;
  if (name == "UNIF" || name == "LC-UNIF") return HarnessMethod::Unif;
  if (name == "FULL" || name == "SVM-FULL") return HarnessMethod::Full;
  throw std::invalid_argument("unknown method: " + name);
}

void parallel_for_jobs(int jobs, int threads,
                       const std::function<void(int)>& fn) {
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, jobs));
  if (threads == 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= jobs) return;
        fn(i);
      }
    });
  }
  for (std::thread& th : pool) th.join();
}

std::pair<Dataset, Dataset> split_half(const Dataset& data, std::uint64_t seed) {
  const Eigen::Index n = data.size();
  if (n < 4) throw std::invalid_argument("split_half: need at least 4 rows");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng rng(seed);
  for (Eigen::Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Eigen::Index>(
        rng.uniform_index(static_cast<std::uint64_t>(i + 1)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  const Eigen::Index n_train = n / 2;
  std::vector<Eigen::Index> train_idx(order.begin(), order.begin() + n_train);
  std::vector<Eigen::Index> test_idx(order.begin() + n_train, order.end());
  return {data.subset(train_idx), data.subset(test_idx)};
}

std::vector<ExperimentResult> run_simulation(const ExperimentConfig& cfg) {
  if (cfg.replications < 1)
    throw std::invalid_argument("run_simulation: replications must be >= 1");
  if (cfg.n_list.empty())
    throw std::invalid_argument("run_simulation: n-list must not be empty");
  if (cfg.methods.empty())
    throw std::invalid_argument("run_simulation: methods must not be empty");
  if (cfg.scenario.has_value() == cfg.input.has_value())
    throw std::invalid_argument(
        "run_simulation: exactly one of scenario/input must be set");

  const std::string source_tag =
      cfg.scenario ? to_string(*cfg.scenario) : cfg.input->stem().string();

  std::optional<LabeledCsv> loaded;
  if (cfg.input)
    loaded = load_labeled_csv(*cfg.input, cfg.label_column, cfg.threshold);

  const int cells_per_rep =
      static_cast<int>(cfg.methods.size() * cfg.n_list.size());
  std::vector<ExperimentResult> results(
      static_cast<std::size_t>(cfg.replications * cells_per_rep));

  PipelineOptions pipe;
  pipe.delta_coef = cfg.delta_coef;
  pipe.gacv_scope = cfg.gacv_scope;
  pipe.solver = cfg.solver;

  parallel_for_jobs(cfg.replications, cfg.threads, [&](int rep) {
    ExperimentResult* cell0 =
        results.data() + static_cast<std::size_t>(rep * cells_per_rep);
    const std::uint64_t data_seed = derive_seed(cfg.seed, kDataTag, rep);

    // pre-fill the identity fields so failed reps still emit full rows
    {
      int c = 0;
      for (HarnessMethod m : cfg.methods)
        for (Eigen::Index n : cfg.n_list) {
          ExperimentResult& r = cell0[c++];
          r.scenario = source_tag;
          r.method = to_string(m);
          r.n = n;
          r.n0 = cfg.n0;
          r.rep = rep;
          r.seed = data_seed;
        }
    }

    Dataset train, test;
    try {
      if (cfg.scenario) {
        train = gen_scenario({*cfg.scenario, cfg.n_train, cfg.p, data_seed});
        test = gen_scenario(
            {*cfg.scenario, cfg.n_train, cfg.p, derive_seed(cfg.seed, kTestTag, rep)});
      } else {
        auto halves = split_half(loaded->data, derive_seed(cfg.seed, kSplitTag, rep));
        train = std::move(halves.first);
        test = std::move(halves.second);
      }
    } catch (const std::exception&) {
      for (int c = 0; c < cells_per_rep; ++c) cell0[c].error_code = 1;
      return;
    }

    std::optional<FullFitRef> full;
    try {
      full = full_reference(train, cfg, source_tag, data_seed);
    } catch (const std::exception&) {
      full.reset();
    }

    const bool wants_pilot =
        std::any_of(cfg.methods.begin(), cfg.methods.end(), [](HarnessMethod m) {
          return m != HarnessMethod::Full;
        });
    std::optional<PilotEstimate> pilot;
    double pilot_seconds = 0.0;
    if (wants_pilot) {
      try {
        const auto t0 = clock_type::now();
        LambdaGrid pilot_grid = grid_for(cfg, cfg.n0);
        pilot = pilot_fit(train, cfg.n0, derive_seed(cfg.seed, kPilotTag, rep),
                          &pilot_grid, pipe);
        pilot_seconds = seconds_since(t0);
      } catch (const std::exception&) {
        pilot.reset();
      }
    }

    int c = 0;
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      const HarnessMethod m = cfg.methods[mi];
      for (Eigen::Index n : cfg.n_list) {
        ExperimentResult& r = cell0[c++];
        try {
          if (m == HarnessMethod::Full) {
            if (!full) {
              r.error_code = 3;
              continue;
            }
            r.mse = 0.0;
            r.accuracy_pct = accuracy_pct(full->beta, test);
            r.t_fit_s = full->fit_seconds;
            continue;
          }
          if (!pilot) {
            r.error_code = 2;
            continue;
          }
          const std::uint64_t draw_seed =
              derive_seed(cfg.seed, kDrawTag ^ (0x100 * (mi + 1)), rep,
                          static_cast<std::uint64_t>(n));
          r.seed = draw_seed;
          const Method method = m == HarnessMethod::A   ? Method::A
                                : m == HarnessMethod::L ? Method::L
                                                        : Method::Unif;
          PhaseBreakdown times;
          LambdaGrid cell_grid = grid_for(cfg, cfg.n0 + n);
          const LeverageFit fit = leverage_fit(train, *pilot, method, n,
                                               draw_seed, &cell_grid, pipe, &times);
          r.t_pilot_s = m == HarnessMethod::Unif ? 0.0 : pilot_seconds;
          r.t_probs_s = times.probs_s;
          r.t_draw_s = times.draw_s;
          r.t_fit_s = times.fit_s;
          r.accuracy_pct = accuracy_pct(fit.beta, test);
          if (full) {
            const double d0 = fit.beta.intercept - full->beta.intercept;
            r.mse = d0 * d0 + (fit.beta.slope - full->beta.slope).squaredNorm();
          }
        } catch (const SolverError&) {
          r.error_code = 3;
        } catch (const std::exception&) {
          r.error_code = 4;
        }
      }
    }
  });

  std::stable_sort(results.begin(), results.end(),
                   [](const ExperimentResult& a, const ExperimentResult& b) {
                     return std::tie(a.scenario, a.method, a.n, a.rep) <
                            std::tie(b.scenario, b.method, b.n, b.rep);
                   });

  if (cfg.write_files) {
    std::filesystem::create_directories(cfg.out_dir);
    write_results_csv(results, cfg.out_dir / "results.csv");
    write_summary_csv(summarize(results), cfg.out_dir / "summary.csv");
  }
  return results;
}

std::vector<SummaryRow> summarize(const std::vector<ExperimentResult>& results) {
  std::vector<SummaryRow> rows;
  std::vector<int> mse_counts;
  auto cell_of = [&](const ExperimentResult& r) -> std::size_t {
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].scenario == r.scenario && rows[i].method == r.method &&
          rows[i].n == r.n && rows[i].n0 == r.n0)
        return i;
    rows.push_back(SummaryRow{r.scenario, r.method, r.n, r.n0, 0, 0,
                              0.0, 0.0, 0.0, 0.0, 0.0, 0.0});
    mse_counts.push_back(0);
    return rows.size() - 1;
  };
  for (const ExperimentResult& r : results) {
    const std::size_t i = cell_of(r);
    SummaryRow& s = rows[i];
    if (r.error_code != 0) {
      ++s.reps_failed;
      continue;
    }
    ++s.reps_ok;
    if (!std::isnan(r.mse)) {
      s.mean_mse += r.mse;
      ++mse_counts[i];
    }
    s.mean_accuracy_pct += r.accuracy_pct;
    s.mean_t_pilot_s += r.t_pilot_s;
    s.mean_t_probs_s += r.t_probs_s;
    s.mean_t_draw_s += r.t_draw_s;
    s.mean_t_fit_s += r.t_fit_s;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    SummaryRow& s = rows[i];
    if (s.reps_ok == 0) {
      s.mean_mse = std::numeric_limits<double>::quiet_NaN();
      s.mean_accuracy_pct = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double k = static_cast<double>(s.reps_ok);
    s.mean_mse = mse_counts[i] > 0
                     ? s.mean_mse / static_cast<double>(mse_counts[i])
                     : std::numeric_limits<double>::quiet_NaN();
    s.mean_accuracy_pct /= k;
    s.mean_t_pilot_s /= k;
    s.mean_t_probs_s /= k;
    s.mean_t_draw_s /= k;
    s.mean_t_fit_s /= k;
  }
  return rows;
}

void write_results_csv(const std::vector<ExperimentResult>& results,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "scenario,criterion,n,n0,rep,seed,mse,accuracy_pct,"
         "t_pilot_s,t_probs_s,t_draw_s,t_fit_s,error_code\n";
  for (const ExperimentResult& r : results) {
    out << r.scenario << ',' << r.method << ',' << r.n << ',' << r.n0 << ','
        << r.rep << ',' << r.seed << ',' << format_double(r.mse) << ','
        << format_double(r.accuracy_pct) << ',' << format_double(r.t_pilot_s)
        << ',' << format_double(r.t_probs_s) << ',' << format_double(r.t_draw_s)
        << ',' << format_double(r.t_fit_s) << ',' << r.error_code << '\n';
  }
}

std::vector<ExperimentResult> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);  // header
  std::vector<ExperimentResult> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f;
    ExperimentResult r;
    std::getline(ss, r.scenario, ',');
    std::getline(ss, r.method, ',');
    std::getline(ss, f, ','); r.n = std::stol(f);
    std::getline(ss, f, ','); r.n0 = std::stol(f);
    std::getline(ss, f, ','); r.rep = std::stoi(f);
    std::getline(ss, f, ','); r.seed = std::stoull(f);
    std::getline(ss, f, ','); r.mse = std::stod(f);
    std::getline(ss, f, ','); r.accuracy_pct = std::stod(f);
    std::getline(ss, f, ','); r.t_pilot_s = std::stod(f);
    std::getline(ss, f, ','); r.t_probs_s = std::stod(f);
    std::getline(ss, f, ','); r.t_draw_s = std::stod(f);
    std::getline(ss, f, ','); r.t_fit_s = std::stod(f);
    std::getline(ss, f, ','); r.error_code = std::stoi(f);
    out.push_back(std::move(r));
  }
  return out;
}

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "scenario,criterion,n,n0,reps_ok,reps_failed,mean_mse,"
         "mean_accuracy_pct,mean_t_pilot_s,mean_t_probs_s,mean_t_draw_s,"
         "mean_t_fit_s\n";
  for (const SummaryRow& s : rows) {
    out << s.scenario << ',' << s.method << ',' << s.n << ',' << s.n0 << ','
        << s.reps_ok << ',' << s.reps_failed << ',' << format_double(s.mean_mse)
        << ',' << format_double(s.mean_accuracy_pct) << ','
        << format_double(s.mean_t_pilot_s) << ','
        << format_double(s.mean_t_probs_s) << ','
        << format_double(s.mean_t_draw_s) << ','
        << format_double(s.mean_t_fit_s) << '\n';
  }
}

TimingReport run_timing(const ExperimentConfig& cfg,
                        const std::vector<Eigen::Index>& n_full_list,
                        int repeats) {
  if (!cfg.scenario)
    throw std::invalid_argument("run_timing: needs a simulation scenario");
  if (n_full_list.empty())
    throw std::invalid_argument("run_timing: empty N list");
  if (repeats < 1) repeats = 1;
  const Eigen::Index n_draw = cfg.n_list.empty() ? 1000 : cfg.n_list.front();

  PipelineOptions pipe;
  pipe.delta_coef = cfg.delta_coef;
  pipe.gacv_scope = cfg.gacv_scope;
  pipe.solver = cfg.solver;

  TimingReport report;
  for (Eigen::Index big_n : n_full_list) {
    const std::uint64_t data_seed = derive_seed(cfg.seed, kDataTag, 0, big_n);
    const Dataset train = gen_scenario({*cfg.scenario, big_n, cfg.p, data_seed});

    // tune the full-sample penalty outside the timed region
    const Eigen::Index sub_n = std::min(cfg.tuning_subsample, train.size());
    const SubsampleDraw sub = draw_with_replacement(
        uniform_probs(train.size()), sub_n, derive_seed(data_seed, kTuneTag));
    std::vector<WeightedInstance> sub_inst;
    for (Eigen::Index idx : sub.indices) sub_inst.push_back({idx, 1.0});
    SolverConfig full_cfg = cfg.solver;
    LambdaGrid full_grid = grid_for(cfg, train.size());
    full_cfg.lambda = select_lambda(train, sub_inst, full_grid, full_cfg);

    auto best_of = [&](const std::function<void()>& body) {
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < repeats; ++r) {
        const auto t0 = clock_type::now();
        body();
        best = std::min(best, seconds_since(t0));
      }
      return best;
    };

    const std::uint64_t pilot_seed = derive_seed(cfg.seed, kPilotTag, 0, big_n);
    const std::uint64_t draw_seed = derive_seed(cfg.seed, kDrawTag, 0, big_n);
    LambdaGrid pilot_grid = grid_for(cfg, cfg.n0);
    LambdaGrid cell_grid = grid_for(cfg, cfg.n0 + n_draw);

    const std::vector<WeightedInstance> all = unit_instances(train);
    const double t_full = best_of(
        [&] { (void)weighted_svm_fit(train, all, full_cfg); });
    const double t_lca = best_of([&] {
      PilotEstimate pilot = pilot_fit(train, cfg.n0, pilot_seed, &pilot_grid, pipe);
      (void)leverage_fit(train, pilot, Method::A, n_draw, draw_seed, &cell_grid, pipe);
    });
    const double t_lcl = best_of([&] {
      PilotEstimate pilot = pilot_fit(train, cfg.n0, pilot_seed, &pilot_grid, pipe);
      (void)leverage_fit(train, pilot, Method::L, n_draw, draw_seed, &cell_grid, pipe);
    });
    const double t_unif = best_of([&] {
      const SubsampleDraw pd = pilot_draw_only(train, cfg.n0, pilot_seed);
      (void)uniform_leverage_fit(train, pd, n_draw, draw_seed, &cell_grid, pipe);
    });

    report.rows.push_back({big_n, "LC-A", t_lca});
    report.rows.push_back({big_n, "LC-L", t_lcl});
    report.rows.push_back({big_n, "LC-UNIF", t_unif});
    report.rows.push_back({big_n, "SVM-FULL", t_full});
    report.full_over_lcl.push_back(t_full / t_lcl);
  }

  report.full_time_increasing = true;
  report.ratio_increasing = true;
  double prev_full = -1.0, prev_ratio = -1.0;
  for (std::size_t k = 0; k < n_full_list.size(); ++k) {
    double t_full = 0.0;
    for (const TimingRow& r : report.rows)
      if (r.n_full == n_full_list[k] && r.method == "SVM-FULL") t_full = r.seconds;
    if (t_full <= prev_full) report.full_time_increasing = false;
    if (report.full_over_lcl[k] <= prev_ratio) report.ratio_increasing = false;
    prev_full = t_full;
    prev_ratio = report.full_over_lcl[k];
  }

  if (cfg.write_files) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream out(cfg.out_dir / "timing.csv");
    out << "N,method,seconds\n";
    for (const TimingRow& r : report.rows)
      out << r.n_full << ',' << r.method << ',' << format_double(r.seconds)
          << '\n';
  }
  return report;
}

void emit_projection(
    const Dataset& data,
    const std::vector<std::pair<std::string, Hyperplane>>& classifiers,
    const std::filesystem::path& path) {
  if (data.dim() < 2)
    throw std::invalid_argument("emit_projection: need p >= 2");
  const Eigen::RowVectorXd mean = data.features().colwise().mean();
  const RowMatrixXd centered = data.features().rowwise() - mean;
  const Eigen::MatrixXd cov =
      centered.transpose() * centered /
      std::max<double>(1.0, static_cast<double>(data.size() - 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  // eigenvalues ascend; the last two columns span the top-2 subspace
  const Eigen::Index p = data.dim();
  Eigen::MatrixXd top2(p, 2);
  top2.col(0) = eig.eigenvectors().col(p - 1);
  top2.col(1) = eig.eigenvectors().col(p - 2);
  const Eigen::MatrixXd coords = centered * top2;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "pc1,pc2,label";
  for (const auto& [name, beta] : classifiers) out << ",dec_" << name;
  out << '\n';
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    out << format_double(coords(i, 0)) << ',' << format_double(coords(i, 1))
        << ',' << static_cast<int>(data.label(i));
    for (const auto& [name, beta] : classifiers)
      out << ',' << format_double(decision_value(beta, data.row(i).transpose()));
    out << '\n';
  }
}

}  // namespace leverage
