#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "svre/optimizers.hpp"
#include "svre/point.hpp"

namespace svre {

/// CSV layout (version 1):
///
///   # svre-trace v1 method=<m> seed=<s> n=<n> config=<hash> initial_distance=<x>
///   iteration,oracle_calls,distance_to_nash,sme_player1,sme_player2,iterate_norm
///   <rows>
///   # status=<completed|diverged> iterations=<t> oracle_calls=<c>
///
/// Reals use 17 significant digits so reruns are byte-identical; passes on
/// the x axis are oracle_calls / n. Wall time is kept out of the file.
inline constexpr const char* kTraceColumns =
    "iteration,oracle_calls,distance_to_nash,sme_player1,sme_player2,iterate_norm";

std::string format_trace_csv(const Trace& trace, const std::string& config_hash);
/// Throws IoError when the file cannot be written.
void write_trace_csv(const Trace& trace, const std::string& config_hash, const std::filesystem::path& path);

struct TraceFile {
  std::string method;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::string config_hash;
  double initial_distance = 0.0;
  std::string status;
  std::uint64_t iterations = 0;
  std::uint64_t oracle_calls = 0;
  std::vector<TraceRow> rows;  // avg_* columns are not stored
};

/// Throws IoError when unreadable, ConfigError when malformed.
TraceFile read_trace_csv(const std::filesystem::path& path);

/// {"theta": [...], "phi": [...]} with 17 significant digits.
void write_point_json(const Point& p, const std::filesystem::path& path);
Point read_point_json(const std::filesystem::path& path);

}  // namespace svre
