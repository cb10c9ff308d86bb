#include "svre/config.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "svre/analysis.hpp"
#include "svre/trace_io.hpp"

namespace svre {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
  }
}

double get_double(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(fmt::format("{}.{}: expected a number", where, key));
  return v.get<double>();
}

std::uint64_t get_uint(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    throw ConfigError(fmt::format("{}.{}: expected a non-negative integer", where, key));
  return v.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(fmt::format("{}.{}: expected a string", where, key));
  return v.get<std::string>();
}

PolicyParams policy_from_json(const json& j, const PolicyParams& base, const std::string& where) {
  require_object(j, where);
  check_keys(j, {"kind", "eta", "eta_theta", "eta_phi", "beta1", "beta2", "eps"}, where);
  PolicyParams p = base;
  if (j.contains("kind")) {
    try {
      p.kind = policy_kind_from_string(get_string(j, "kind", where));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("eta")) {
    if (j.contains("eta_theta") || j.contains("eta_phi"))
      throw ConfigError(where + ": give either eta or eta_theta/eta_phi");
    p.eta_theta = p.eta_phi = get_double(j, "eta", where);
  }
  if (j.contains("eta_theta")) p.eta_theta = get_double(j, "eta_theta", where);
  if (j.contains("eta_phi")) p.eta_phi = get_double(j, "eta_phi", where);
  if (j.contains("beta1")) p.beta1 = get_double(j, "beta1", where);
  if (j.contains("beta2")) p.beta2 = get_double(j, "beta2", where);
  if (j.contains("eps")) p.eps = get_double(j, "eps", where);
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return p;
}

json policy_to_json(const PolicyParams& p) {
  return {{"kind", to_string(p.kind)}, {"eta_theta", p.eta_theta}, {"eta_phi", p.eta_phi},
          {"beta1", p.beta1},          {"beta2", p.beta2},         {"eps", p.eps}};
}

}  // namespace

GameConfig game_config_from_json(const json& j) {
  const std::string where = "game";
  require_object(j, where);
  if (!j.contains("kind")) throw ConfigError("game: missing 'kind'");
  GameConfig g;
  g.kind = get_string(j, "kind", where);
  if (g.kind == "bilinear_counterexample") {
    check_keys(j, {"kind", "n", "epsilon"}, where);
  } else if (g.kind == "affine_bilinear") {
    check_keys(j, {"kind", "n", "d", "seed"}, where);
  } else if (g.kind == "quadratic") {
    check_keys(j, {"kind", "n", "d", "mu", "L", "seed", "coupling", "spread", "offset_scale"}, where);
  } else {
    throw ConfigError("game: unknown kind '" + g.kind + "'");
  }
  if (!j.contains("n")) throw ConfigError("game: missing 'n'");
  g.n = get_uint(j, "n", where);
  if (g.n == 0) throw ConfigError("game.n: must be >= 1");
  g.d = j.contains("d") ? get_uint(j, "d", where) : g.n;
  if (g.kind == "bilinear_counterexample") g.d = g.n;
  if (g.d == 0) throw ConfigError("game.d: must be >= 1");
  if (g.kind == "affine_bilinear" && g.d != g.n) throw ConfigError("game: affine_bilinear needs d == n");
  if (j.contains("epsilon")) g.epsilon = get_double(j, "epsilon", where);
  if (g.epsilon < 0.0) throw ConfigError("game.epsilon: must be >= 0");
  if (j.contains("mu")) g.mu = get_double(j, "mu", where);
  if (j.contains("L")) g.L = get_double(j, "L", where);
  if (g.kind == "quadratic" && !(g.mu > 0.0 && g.mu <= g.L)) throw ConfigError("game: need 0 < mu <= L");
  if (j.contains("seed")) g.seed = get_uint(j, "seed", where);
  if (j.contains("spread")) g.spread = get_double(j, "spread", where);
  if (j.contains("offset_scale")) g.offset_scale = get_double(j, "offset_scale", where);
  if (j.contains("coupling")) {
    const json& c = j.at("coupling");
    if (c.is_number()) {
      g.coupling = c.get<double>();
    } else if (c.is_array()) {
      Eigen::MatrixXd m(static_cast<Eigen::Index>(g.d), static_cast<Eigen::Index>(g.d));
      if (c.size() != g.d) throw ConfigError("game.coupling: matrix must have d rows");
      for (std::size_t r = 0; r < g.d; ++r) {
        if (!c[r].is_array() || c[r].size() != g.d) throw ConfigError("game.coupling: matrix must have d columns");
        for (std::size_t k = 0; k < g.d; ++k) {
          if (!c[r][k].is_number()) throw ConfigError("game.coupling: non-numeric entry");
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = c[r][k].get<double>();
        }
      }
      g.coupling_matrix = std::move(m);
    } else {
      throw ConfigError("game.coupling: expected a number or a matrix");
    }
  }
  return g;
}

json to_json(const GameConfig& g) {
  json j = {{"kind", g.kind}, {"n", g.n}};
  if (g.kind == "bilinear_counterexample") {
    j["epsilon"] = g.epsilon;
  } else if (g.kind == "affine_bilinear") {
    j["d"] = g.d;
    j["seed"] = g.seed;
  } else {
    j["d"] = g.d;
    j["mu"] = g.mu;
    j["L"] = g.L;
    j["seed"] = g.seed;
    j["spread"] = g.spread;
    j["offset_scale"] = g.offset_scale;
    if (g.coupling_matrix) {
      json rows = json::array();
      for (Eigen::Index r = 0; r < g.coupling_matrix->rows(); ++r) {
        json row = json::array();
        for (Eigen::Index k = 0; k < g.coupling_matrix->cols(); ++k) row.push_back((*g.coupling_matrix)(r, k));
        rows.push_back(row);
      }
      j["coupling"] = rows;
    } else if (g.coupling) {
      j["coupling"] = *g.coupling;
    }
  }
  return j;
}

GamePtr build_game(const GameConfig& g) {
  try {
    if (g.kind == "bilinear_counterexample") return make_bilinear_counterexample({g.n, g.epsilon});
    if (g.kind == "affine_bilinear") return make_affine_bilinear({g.n, g.d, g.seed});
    if (g.kind == "quadratic") {
      QuadraticGameSpec s;
      s.d = g.d;
      s.n = g.n;
      s.mu = g.mu;
      s.L = g.L;
      s.coupling = g.coupling;
      s.coupling_matrix = g.coupling_matrix;
      s.spread = g.spread;
      s.offset_scale = g.offset_scale;
      s.seed = g.seed;
      return make_quadratic_game(s);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("game: unknown kind '" + g.kind + "'");
}

MethodEntry parse_method_entry(const std::string& name) {
  MethodEntry e;
  e.name = name;
  std::string base = name;
  if (base.rfind("avg_", 0) == 0) {
    e.averaged = true;
    base = base.substr(4);
  }
  try {
    e.base = method_from_string(base);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  return e;
}

ExperimentConfig parse_experiment(const json& j, const std::filesystem::path& base_dir) {
  const std::string where = "config";
  require_object(j, where);
  check_keys(j,
             {"name", "game", "methods", "policy", "method_policies", "seeds", "budget", "record_every", "geom_param", "restart_p",
              "batch_size", "sampling", "memorization", "sme_decay", "init_scale", "init_from", "output_dir"},
             where);
  ExperimentConfig c;
  c.base_dir = base_dir;
  try {
    if (j.contains("name")) c.name = get_string(j, "name", where);
    if (!j.contains("game")) throw ConfigError("config: missing 'game'");
    c.game = game_config_from_json(j.at("game"));

    if (!j.contains("methods") || !j.at("methods").is_array() || j.at("methods").empty())
      throw ConfigError("config.methods: expected a non-empty array");
    std::set<std::string> seen;
    for (const json& m : j.at("methods")) {
      if (!m.is_string()) throw ConfigError("config.methods: expected method names");
      if (!seen.insert(m.get<std::string>()).second) throw ConfigError("config.methods: duplicate entry");
      c.methods.push_back(parse_method_entry(m.get<std::string>()));
    }

    if (j.contains("policy")) c.policy = policy_from_json(j.at("policy"), PolicyParams{}, "policy");
    if (j.contains("method_policies")) {
      const json& mp = j.at("method_policies");
      require_object(mp, "method_policies");
      for (const auto& [name, value] : mp.items()) {
        Method base;
        try {
          base = method_from_string(name);
        } catch (const std::invalid_argument&) {
          throw ConfigError("method_policies: unknown base method '" + name + "'");
        }
        const bool used = std::any_of(c.methods.begin(), c.methods.end(),
                                      [&](const MethodEntry& m) { return m.base == base; });
        if (!used) throw ConfigError("method_policies: '" + name + "' is not among the methods");
        c.method_policies[name] = policy_from_json(value, c.policy, "method_policies." + name);
      }
    }

    if (j.contains("seeds")) {
      const json& s = j.at("seeds");
      if (!s.is_array() || s.empty()) throw ConfigError("config.seeds: expected a non-empty array");
      c.seeds.clear();
      for (const json& v : s) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError("config.seeds: expected non-negative integers");
        c.seeds.push_back(v.get<std::uint64_t>());
      }
    }

    if (!j.contains("budget")) throw ConfigError("config: missing 'budget'");
    const json& b = j.at("budget");
    require_object(b, "budget");
    check_keys(b, {"iterations", "passes"}, "budget");
    if (b.contains("iterations")) c.max_iterations = get_uint(b, "iterations", "budget");
    if (b.contains("passes")) {
      c.max_passes = get_double(b, "passes", "budget");
      if (!(*c.max_passes >= 0.0)) throw ConfigError("budget.passes: must be >= 0");
    }
    if (!c.max_iterations && !c.max_passes) throw ConfigError("budget: give iterations and/or passes");

    if (j.contains("record_every")) c.record_every = get_uint(j, "record_every", where);
    if (c.record_every == 0) throw ConfigError("config.record_every: must be >= 1");
    if (j.contains("geom_param")) {
      c.geom_param = get_double(j, "geom_param", where);
      if (!(*c.geom_param > 0.0 && *c.geom_param <= 1.0)) throw ConfigError("config.geom_param: must lie in (0, 1]");
    }
    if (j.contains("restart_p")) c.restart_p = get_double(j, "restart_p", where);
    if (!(c.restart_p >= 0.0 && c.restart_p <= 1.0)) throw ConfigError("config.restart_p: must lie in [0, 1]");
    if (j.contains("batch_size")) c.batch_size = get_uint(j, "batch_size", where);
    if (c.batch_size == 0 || c.batch_size > c.game.n) throw ConfigError("config.batch_size: need 1 <= batch_size <= n");
    if (j.contains("sampling")) c.sampling = get_string(j, "sampling", where);
    if (c.sampling != "uniform" && c.sampling != "lipschitz")
      throw ConfigError("config.sampling: expected 'uniform' or 'lipschitz'");
    if (j.contains("memorization")) {
      const std::string m = get_string(j, "memorization", where);
      if (m == "svrg") {
        c.memorization = Memorization::kSvrg;
      } else if (m == "saga") {
        c.memorization = Memorization::kSaga;
      } else {
        throw ConfigError("config.memorization: expected 'svrg' or 'saga'");
      }
    }
    if (j.contains("sme_decay")) c.sme_decay = get_double(j, "sme_decay", where);
    if (!(c.sme_decay >= 0.0 && c.sme_decay < 1.0)) throw ConfigError("config.sme_decay: must lie in [0, 1)");
    if (j.contains("init_scale")) c.init_scale = get_double(j, "init_scale", where);
    if (!(c.init_scale >= 0.0)) throw ConfigError("config.init_scale: must be >= 0");
    if (j.contains("init_from")) c.init_from = std::filesystem::path(get_string(j, "init_from", where));
    if (j.contains("output_dir")) c.output_dir = get_string(j, "output_dir", where);

    for (const MethodEntry& m : c.methods) {
      if (is_variance_reduced(m.base) && policy_for(c, m.base).kind == PolicyKind::kAdam)
        throw ConfigError("config: variance reduced methods take a constant or vrad policy");
      if (c.memorization == Memorization::kSaga && m.base == Method::kSVRERestarted)
        throw ConfigError("config: saga memorization cannot be combined with svre_restarted");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: invalid JSON ({})", path.string(), e.what()));
  }
  return parse_experiment(j, path.parent_path());
}

json to_json(const ExperimentConfig& c) {
  json methods = json::array();
  for (const MethodEntry& m : c.methods) methods.push_back(m.name);
  json budget = json::object();
  if (c.max_iterations) budget["iterations"] = *c.max_iterations;
  if (c.max_passes) budget["passes"] = *c.max_passes;
  json j = {{"name", c.name},
            {"game", to_json(c.game)},
            {"methods", methods},
            {"policy", policy_to_json(c.policy)},
            {"seeds", c.seeds},
            {"budget", budget},
            {"record_every", c.record_every},
            {"restart_p", c.restart_p},
            {"batch_size", c.batch_size},
            {"sampling", c.sampling},
            {"memorization", c.memorization == Memorization::kSvrg ? "svrg" : "saga"},
            {"sme_decay", c.sme_decay},
            {"init_scale", c.init_scale}};
  if (!c.method_policies.empty()) {
    json mp = json::object();
    for (const auto& [name, p] : c.method_policies) mp[name] = policy_to_json(p);
    j["method_policies"] = mp;
  }
  if (c.geom_param) j["geom_param"] = *c.geom_param;
  if (c.init_from) j["init_from"] = c.init_from->string();
  if (c.output_dir) j["output_dir"] = *c.output_dir;
  return j;
}

std::string config_hash(const ExperimentConfig& c) {
  json j = to_json(c);
  j.erase("seeds");
  j.erase("output_dir");
  j.erase("name");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

const PolicyParams& policy_for(const ExperimentConfig& c, Method method) {
  const auto it = c.method_policies.find(to_string(method));
  return it == c.method_policies.end() ? c.policy : it->second;
}

RunConfig make_run_config(const ExperimentConfig& c, Method method, std::uint64_t seed, const FiniteSumGame& game) {
  RunConfig r;
  r.method = method;
  r.policy = policy_for(c, method);
  r.seed = seed;
  r.max_iterations = c.max_iterations;
  r.max_passes = c.max_passes;
  r.record_every = c.record_every;
  r.batch_size = c.batch_size;
  r.geom_param = c.geom_param;
  r.restart_p = c.restart_p;
  r.memorization = c.memorization;
  r.sme_decay = c.sme_decay;
  r.init_scale = c.init_scale;
  if (c.sampling == "lipschitz" && is_variance_reduced(method)) {
    if (!game.is_affine()) throw ConfigError("config.sampling: lipschitz sampling needs an affine game");
    ConstantsOptions opts;
    opts.sampling = "lipschitz";
    const OperatorConstants k = estimate_constants(game, opts);
    if (k.sampling != "lipschitz")
      throw ConfigError("config.sampling: some per-sample cocoercivity constant is infinite");
    r.sampling_weights = k.ell_i;
  }
  if (c.init_from) {
    const std::filesystem::path p = c.init_from->is_absolute() ? *c.init_from : c.base_dir / *c.init_from;
    r.init = read_point_json(p);
    if (r.init->theta.size() != game.d_theta() || r.init->phi.size() != game.d_phi())
      throw ConfigError("init_from: iterate shape does not match the game");
  }
  return r;
}

}  // namespace svre
