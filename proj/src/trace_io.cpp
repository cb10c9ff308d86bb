#include "svre/trace_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "svre/config.hpp"

namespace svre {

namespace {

std::string real(double x) { return fmt::format("{:.17g}", x); }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

// Parses "key=value" tokens after a leading '#' and a fixed prefix.
std::map<std::string, std::string> parse_tags(const std::string& line) {
  std::map<std::string, std::string> tags;
  std::istringstream in(line);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq != std::string::npos) tags[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return tags;
}

double parse_real(const std::string& s) {
  if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

}  // namespace

std::string format_trace_csv(const Trace& trace, const std::string& config_hash) {
  std::string out;
  out += fmt::format("# svre-trace v1 method={} seed={} n={} config={} initial_distance={}\n", trace.method, trace.seed,
                     trace.n, config_hash, real(trace.initial_distance));
  out += kTraceColumns;
  out += '\n';
  for (const TraceRow& r : trace.rows) {
    out += fmt::format("{},{},{},{},{},{}\n", r.iteration, r.oracle_calls, real(r.distance_to_nash),
                       real(r.sme_player1), real(r.sme_player2), real(r.iterate_norm));
  }
  out += fmt::format("# status={} iterations={} oracle_calls={}\n", to_string(trace.status), trace.iterations,
                     trace.oracle_calls);
  return out;
}

void write_trace_csv(const Trace& trace, const std::string& config_hash, const std::filesystem::path& path) {
  write_file(path, format_trace_csv(trace, config_hash));
}

TraceFile read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read trace " + path.string());
  TraceFile t;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# svre-trace v1", 0) != 0)
    throw ConfigError(path.string() + ": missing trace header");
  try {
    auto tags = parse_tags(line);
    t.method = tags.at("method");
    t.seed = std::stoull(tags.at("seed"));
    t.n = std::stoull(tags.at("n"));
    t.config_hash = tags.at("config");
    t.initial_distance = parse_real(tags.at("initial_distance"));
    if (!std::getline(in, line) || line != kTraceColumns) throw ConfigError(path.string() + ": unexpected columns");
    bool footer = false;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line[0] == '#') {
        auto f = parse_tags(line);
        t.status = f.at("status");
        t.iterations = std::stoull(f.at("iterations"));
        t.oracle_calls = std::stoull(f.at("oracle_calls"));
        footer = true;
        break;
      }
      std::vector<std::string> cells;
      std::istringstream row(line);
      std::string cell;
      while (std::getline(row, cell, ',')) cells.push_back(cell);
      if (cells.size() != 6) throw ConfigError(path.string() + ": row with wrong column count");
      TraceRow r;
      r.iteration = std::stoull(cells[0]);
      r.oracle_calls = std::stoull(cells[1]);
      r.distance_to_nash = parse_real(cells[2]);
      r.sme_player1 = parse_real(cells[3]);
      r.sme_player2 = parse_real(cells[4]);
      r.iterate_norm = parse_real(cells[5]);
      t.rows.push_back(r);
    }
    if (!footer) throw ConfigError(path.string() + ": missing footer");
  } catch (const std::out_of_range&) {
    throw ConfigError(path.string() + ": malformed trace");
  } catch (const std::invalid_argument&) {
    throw ConfigError(path.string() + ": malformed trace");
  }
  return t;
}

void write_point_json(const Point& p, const std::filesystem::path& path) {
  std::string out = "{\"theta\": [";
  for (Eigen::Index k = 0; k < p.theta.size(); ++k) out += (k ? ", " : "") + real(p.theta[k]);
  out += "], \"phi\": [";
  for (Eigen::Index k = 0; k < p.phi.size(); ++k) out += (k ? ", " : "") + real(p.phi[k]);
  out += "]}\n";
  write_file(path, out);
}

Point read_point_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read iterate " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON");
  }
  if (!j.is_object() || j.size() != 2 || !j.contains("theta") || !j.contains("phi"))
    throw ConfigError(path.string() + ": expected {\"theta\": [...], \"phi\": [...]}");
  auto vec = [&](const nlohmann::json& a) {
    if (!a.is_array() || a.empty()) throw ConfigError(path.string() + ": expected non-empty arrays");
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (!a[k].is_number()) throw ConfigError(path.string() + ": non-numeric entry");
      v[static_cast<Eigen::Index>(k)] = a[k].get<double>();
    }
    return v;
  };
  return {vec(j.at("theta")), vec(j.at("phi"))};
}

}  // namespace svre
