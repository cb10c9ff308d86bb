#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "svre/config.hpp"

namespace svre {

struct RunOptions {
  std::optional<std::vector<std::uint64_t>> seeds;  // overrides the config
  std::optional<std::filesystem::path> out;         // overrides output_dir
  unsigned parallel = 1;
  bool quiet = true;
};

struct RunReport {
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> csv_files;  // config method order, then seed
  nlohmann::json summary;
};

/// Output directory: --out if given; otherwise output_dir when absolute;
/// otherwise <root>/<output_dir or name> with root = $SVRE_OUTPUT_ROOT or
/// "out".
std::filesystem::path resolve_output_dir(const ExperimentConfig& config, const RunOptions& options);

/// Runs every (base method, seed) pair once; "avg_" entries reuse the run of
/// their base method. Writes <method>_seed<s>.csv and
/// <method>_seed<s>_final.json per entry plus summary.json. Runs are
/// independent and write disjoint files, so `parallel` only changes wall
/// time. Divergent runs are data, not errors.
RunReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

std::string trace_file_stem(const std::string& method, std::uint64_t seed);

}  // namespace svre
