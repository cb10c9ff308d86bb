// Command line front end: run experiment configs, verify suites, compare traces.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include <fmt/format.h>

#include "svre/compare.hpp"
#include "svre/config.hpp"
#include "svre/runner.hpp"
#include "svre/verify.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

int cmd_run(const std::string& config_path, const std::vector<std::uint64_t>& seeds, const std::string& out,
            unsigned parallel) {
  svre::ExperimentConfig config = svre::load_experiment(config_path);
  svre::RunOptions opts;
  if (!seeds.empty()) opts.seeds = seeds;
  if (!out.empty()) opts.out = out;
  opts.parallel = parallel;
  const svre::RunReport report = svre::run_experiment(config, opts);
  for (const auto& [name, m] : report.summary.at("methods").items()) {
    const auto& mean = m.at("final_distance_mean");
    fmt::print("{:<22} final distance (seed mean) {:>12}  diverged {}\n", name,
               mean.is_null() ? std::string("inf/nan") : fmt::format("{:.3e}", mean.get<double>()),
               m.at("diverged").get<std::size_t>());
  }
  fmt::print("wrote {} traces to {}\n", report.csv_files.size(), report.out_dir.string());
  return 0;
}

int cmd_verify(const std::string& suite, unsigned parallel) {
  const std::vector<svre::CheckResult> results = svre::run_suite(suite, parallel);
  bool ok = true;
  for (const auto& r : results) {
    fmt::print("{}\n", svre::format_check(r));
    ok = ok && r.passed;
  }
  fmt::print("suite {}: {}\n", suite, ok ? "PASS" : "FAIL");
  return ok ? 0 : 3;
}

int cmd_compare(const std::string& dir, const std::string& out) {
  const nlohmann::json comparison = svre::compare_traces(dir);
  fmt::print("{}", svre::format_comparison(comparison));
  const std::filesystem::path path = out.empty() ? std::filesystem::path(dir) / "compare.json" : std::filesystem::path(out);
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw svre::IoError("cannot write " + path.string());
  f << comparison.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extragradient and variance-reduced extragradient experiments on finite-sum games"};
  app.require_subcommand(1);

  std::vector<std::uint64_t> seeds;
  std::string out;
  unsigned parallel = 1;

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run every (method, seed) of an experiment config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--seeds", seeds, "Seeds overriding the config, e.g. --seeds 0,1,2")->delimiter(',');
  run->add_option("--out", out, "Output directory (default: $SVRE_OUTPUT_ROOT/<output_dir>)");
  run->add_option("--parallel", parallel, "Concurrent runs")->check(CLI::PositiveNumber);

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "thm1 | thm2 | fig3 | estimators | policies")->required();
  verify->add_option("--parallel", parallel, "Concurrent runs for experiment-backed checks")
      ->check(CLI::PositiveNumber);

  std::string dir;
  std::string compare_out;
  auto* compare = app.add_subcommand("compare", "Summarize the traces in a directory");
  compare->add_option("dir", dir, "Directory holding trace CSVs")->required();
  compare->add_option("--out", compare_out, "Where to write the JSON table (default: <dir>/compare.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path, seeds, out, parallel);
    if (*verify) return cmd_verify(suite, parallel);
    if (*compare) return cmd_compare(dir, compare_out);
  } catch (const svre::ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitConfig;
  } catch (const svre::IoError& e) {
    fmt::print(stderr, "I/O error: {}\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
