#include "svre/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include <fmt/format.h>

#include "svre/config.hpp"
#include "svre/trace_io.hpp"

namespace svre {

using nlohmann::json;

namespace {

struct MethodStats {
  std::size_t runs = 0;
  std::size_t diverged = 0;
  double best = std::numeric_limits<double>::infinity();
  double final_sum = 0.0;
  double final_min = std::numeric_limits<double>::infinity();
  double final_max = -std::numeric_limits<double>::infinity();
  double passes_sum = 0.0;
};

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string cell(const json& v) {
  if (v.is_null()) return "inf/nan";
  return fmt::format("{:.3e}", v.get<double>());
}

}  // namespace

json compare_traces(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list " + dir.string());
  if (files.empty()) throw ConfigError("no trace CSV files in " + dir.string());
  std::sort(files.begin(), files.end());

  std::map<std::string, MethodStats> stats;
  for (const auto& path : files) {
    const TraceFile t = read_trace_csv(path);
    MethodStats& s = stats[t.method];
    ++s.runs;
    if (t.status == "diverged") ++s.diverged;
    double final_distance = t.initial_distance;
    for (const TraceRow& r : t.rows) {
      if (std::isfinite(r.distance_to_nash)) s.best = std::min(s.best, r.distance_to_nash);
      final_distance = r.distance_to_nash;
    }
    // A diverged run ends at an unbounded distance.
    if (t.status == "diverged" || !std::isfinite(final_distance))
      final_distance = std::numeric_limits<double>::infinity();
    s.final_sum += final_distance;
    s.final_min = std::min(s.final_min, final_distance);
    s.final_max = std::max(s.final_max, final_distance);
    s.passes_sum += static_cast<double>(t.oracle_calls) / static_cast<double>(std::max<std::size_t>(t.n, 1));
  }

  json methods = json::array();
  for (const auto& [name, s] : stats) {
    const double runs = static_cast<double>(s.runs);
    methods.push_back({{"method", name},
                       {"runs", s.runs},
                       {"diverged", s.diverged},
                       {"best_distance", num(s.best)},
                       {"final_distance_mean", num(s.final_sum / runs)},
                       {"final_distance_min", num(s.final_min)},
                       {"final_distance_max", num(s.final_max)},
                       {"passes_mean", s.passes_sum / runs}});
  }
  return {{"format", "svre-compare v1"}, {"directory", dir.string()}, {"methods", methods}};
}

std::string format_comparison(const json& comparison) {
  std::string out = fmt::format("{:<22} {:>5} {:>9} {:>12} {:>12} {:>12}\n", "method", "runs", "diverged", "best",
                                "final_mean", "passes");
  for (const json& m : comparison.at("methods")) {
    out += fmt::format("{:<22} {:>5} {:>9} {:>12} {:>12} {:>12.1f}\n", m.at("method").get<std::string>(),
                       m.at("runs").get<std::size_t>(), m.at("diverged").get<std::size_t>(),
                       cell(m.at("best_distance")), cell(m.at("final_distance_mean")),
                       m.at("passes_mean").get<double>());
  }
  return out;
}

}  // namespace svre
