#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "svre/game.hpp"
#include "svre/optimizers.hpp"

namespace svre {

/// Invalid configuration or arguments (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output (CLI exit code 2).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Game spec as written in a config. Keys accepted per kind:
///   bilinear_counterexample  n, epsilon
///   affine_bilinear          n, d, seed
///   quadratic                n, d, mu, L, seed, coupling (number or d x d
///                            array of rows), spread, offset_scale
struct GameConfig {
  std::string kind;
  std::size_t n = 0;
  std::size_t d = 0;
  double epsilon = 0.0;
  double mu = 0.1;
  double L = 1.0;
  std::optional<double> coupling;
  std::optional<Eigen::MatrixXd> coupling_matrix;
  double spread = 0.5;
  double offset_scale = 1.0;
  std::uint64_t seed = 0;
};

GameConfig game_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GameConfig& g);
GamePtr build_game(const GameConfig& g);

/// A method entry: a base method, optionally reported through its running
/// average ("avg_" prefix).
struct MethodEntry {
  std::string name;
  Method base = Method::kSVRE;
  bool averaged = false;
};
MethodEntry parse_method_entry(const std::string& name);

struct ExperimentConfig {
  std::string name = "experiment";
  GameConfig game;
  std::vector<MethodEntry> methods;
  PolicyParams policy;
  // Per-method step-size policies keyed by base method name ("svre", not
  // "avg_svre"); fields not given fall back to `policy`.
  std::map<std::string, PolicyParams> method_policies;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::optional<std::uint64_t> max_iterations;
  std::optional<double> max_passes;
  std::uint64_t record_every = 1;
  std::optional<double> geom_param;
  double restart_p = 0.5;
  std::size_t batch_size = 1;
  std::string sampling = "uniform";  // or "lipschitz"
  Memorization memorization = Memorization::kSvrg;
  double sme_decay = 0.9;
  double init_scale = 0.0;
  std::optional<std::filesystem::path> init_from;  // iterate JSON
  std::optional<std::string> output_dir;
  std::filesystem::path base_dir;  // directory of the config file
};

/// Strict parse: unknown or misspelled keys, wrong types and out-of-range
/// values throw ConfigError before any computation starts.
ExperimentConfig parse_experiment(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
/// Throws IoError when the file cannot be read, ConfigError when it is not
/// valid JSON or fails the schema.
ExperimentConfig load_experiment(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& c);

/// FNV-1a hash of the canonical JSON of everything that affects a trajectory
/// (seeds and output location excluded), as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

/// Policy used by `method`: its method_policies entry or the shared policy.
const PolicyParams& policy_for(const ExperimentConfig& c, Method method);

/// RunConfig for one (method, seed) of an experiment. Lipschitz sampling
/// weights come from the exact per-sample constants of `game`.
RunConfig make_run_config(const ExperimentConfig& c, Method method, std::uint64_t seed, const FiniteSumGame& game);

}  // namespace svre
