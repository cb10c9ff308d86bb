#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

namespace svre {

/// Reads every trace CSV in `dir` (non-recursive, sorted by name) and groups
/// them by method: best and final distance (seed means and extremes), passes,
/// and how many runs diverged. Throws ConfigError when no trace is found,
/// IoError when the directory cannot be read.
nlohmann::json compare_traces(const std::filesystem::path& dir);

/// Fixed-width text table of a compare_traces result.
std::string format_comparison(const nlohmann::json& comparison);

}  // namespace svre
