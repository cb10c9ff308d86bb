#include "svre/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "svre/analysis.hpp"
#include "svre/trace_io.hpp"

namespace svre {

using nlohmann::json;

namespace {

// Exact per-sample constants cost one eigen-decomposition and one SVD per
// sample; skip them beyond desk scale.
bool per_sample_affordable(const FiniteSumGame& game) {
  const double d = static_cast<double>(game.dim());
  return static_cast<double>(game.n()) * d * d * d <= 5e7;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json constants_json(const FiniteSumGame& game, const ExperimentConfig& config) {
  json out = json::object();
  if (!game.is_affine()) {
    out["available"] = false;
    return out;
  }
  ConstantsOptions opts;
  opts.per_sample = per_sample_affordable(game);
  opts.sampling = config.sampling;
  OperatorConstants c;
  try {
    c = estimate_constants(game, opts);
  } catch (const std::exception& e) {
    out["available"] = false;
    out["error"] = e.what();
    return out;
  }
  out["available"] = true;
  out["exact"] = c.exact;
  out["mu"] = number_or_null(c.mu);
  out["L"] = number_or_null(c.L);
  out["gamma"] = number_or_null(c.gamma);
  out["ell"] = number_or_null(c.ell);
  out["per_sample"] = opts.per_sample;
  if (opts.per_sample) {
    out["sampling"] = c.sampling;
    out["ell_bar"] = number_or_null(c.ell_bar);
    out["gamma_bar"] = number_or_null(c.gamma_bar);
    out["gamma_i_note"] = "per-sample regularity derived from per-sample Jacobians";
    if (std::isfinite(c.ell_bar) && c.ell_bar > 0.0) {
      const ContractionBound b =
          thm2_bound(c, config.policy.eta_theta, config.policy.eta_phi, game.n(), 1.0);
      out["svre_contraction_bound"] = {{"factor", b.factor}, {"claimed", b.claimed}, {"warning", b.warning}};
      out["svre_reference_factor"] = thm2_reference_factor(c, game.n(), 1.0);
      out["step_limit"] = 1.0 / (40.0 * c.ell_bar);
    }
  }
  return out;
}

struct Task {
  Method base;
  std::uint64_t seed;
};

struct TaskResult {
  Trace trace;
  std::string error;
};

}  // namespace

std::string trace_file_stem(const std::string& method, std::uint64_t seed) {
  return fmt::format("{}_seed{}", method, seed);
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& config, const RunOptions& options) {
  if (options.out) return *options.out;
  if (config.output_dir && std::filesystem::path(*config.output_dir).is_absolute()) return *config.output_dir;
  const char* env = std::getenv("SVRE_OUTPUT_ROOT");
  const std::filesystem::path root = (env && *env) ? std::filesystem::path(env) : std::filesystem::path("out");
  return root / (config.output_dir ? *config.output_dir : config.name);
}

RunReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const std::vector<std::uint64_t> seeds = options.seeds.value_or(config.seeds);
  if (seeds.empty()) throw ConfigError("no seeds to run");
  const GamePtr game = build_game(config.game);
  const std::string hash = config_hash(config);

  // Validate every run configuration before any computation.
  std::vector<Method> bases;
  for (const MethodEntry& m : config.methods) {
    if (std::find(bases.begin(), bases.end(), m.base) == bases.end()) bases.push_back(m.base);
  }
  std::map<Method, RunConfig> templates;
  for (Method b : bases) {
    RunConfig rc = make_run_config(config, b, 0, *game);
    try {
      validate(rc, *game);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    templates.emplace(b, std::move(rc));
  }

  RunReport report;
  report.out_dir = resolve_output_dir(config, options);
  std::error_code ec;
  std::filesystem::create_directories(report.out_dir, ec);
  if (ec || !std::filesystem::is_directory(report.out_dir))
    throw IoError("cannot create output directory " + report.out_dir.string());

  std::vector<Task> tasks;
  for (Method b : bases) {
    for (std::uint64_t s : seeds) tasks.push_back({b, s});
  }
  std::vector<TaskResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      try {
        RunConfig rc = templates.at(tasks[k].base);
        rc.seed = tasks[k].seed;
        results[k].trace = run_method(game, rc);
        // Each task owns its files; nothing else is shared.
        for (const MethodEntry& m : config.methods) {
          if (m.base != tasks[k].base) continue;
          const Trace view = m.averaged ? averaged_view(results[k].trace) : results[k].trace;
          const std::string stem = trace_file_stem(m.name, tasks[k].seed);
          write_trace_csv(view, hash, report.out_dir / (stem + ".csv"));
          write_point_json(view.final_iterate, report.out_dir / (stem + "_final.json"));
        }
      } catch (const std::exception& e) {
        results[k].error = e.what();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.parallel, static_cast<unsigned>(tasks.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const TaskResult& r : results) {
    if (!r.error.empty()) throw IoError(r.error);
  }

  json methods = json::object();
  for (const MethodEntry& m : config.methods) {
    json per_seed = json::array();
    double sum = 0.0;
    double passes = 0.0;
    std::size_t diverged = 0;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      if (tasks[k].base != m.base) continue;
      const Trace view = m.averaged ? averaged_view(results[k].trace) : results[k].trace;
      const double final_distance = view.rows.empty() ? view.initial_distance : view.rows.back().distance_to_nash;
      const double p = static_cast<double>(view.oracle_calls) / static_cast<double>(view.n);
      sum += final_distance;
      passes += p;
      if (view.status == RunStatus::kDiverged) ++diverged;
      per_seed.push_back({{"seed", view.seed},
                          {"status", to_string(view.status)},
                          {"final_distance", number_or_null(final_distance)},
                          {"initial_distance", number_or_null(view.initial_distance)},
                          {"iterations", view.iterations},
                          {"oracle_calls", view.oracle_calls},
                          {"passes", p},
                          {"epochs", view.epochs},
                          {"restarts", view.restarts},
                          {"wall_seconds", view.wall_seconds},
                          {"csv", trace_file_stem(m.name, view.seed) + ".csv"}});
      report.csv_files.push_back(report.out_dir / (trace_file_stem(m.name, view.seed) + ".csv"));
    }
    const double count = static_cast<double>(per_seed.size());
    methods[m.name] = {{"final_distance_mean", number_or_null(sum / count)},
                       {"passes_mean", passes / count},
                       {"diverged", diverged},
                       {"runs", per_seed}};
  }
  report.summary = {{"format", "svre-summary v1"},
                    {"config_hash", hash},
                    {"config", to_json(config)},
                    {"seeds", seeds},
                    {"constants", constants_json(*game, config)},
                    {"methods", methods}};
  const std::filesystem::path summary_path = report.out_dir / "summary.json";
  std::ofstream out(summary_path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + summary_path.string());
  out << report.summary.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + summary_path.string());
  return report;
}

}  // namespace svre
