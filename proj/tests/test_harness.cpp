#include <cstdlib>
#include <fstream>
#include <iterator>

#include <unistd.h>

#include <gtest/gtest.h>

#include "svre/compare.hpp"
#include "svre/config.hpp"
#include "svre/runner.hpp"
#include "svre/trace_io.hpp"
#include "svre/verify.hpp"

namespace svre {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("svre-harness-" + std::to_string(::getpid()) + "-" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json minimal_config() {
  return json::parse(R"({
    "name": "minimal",
    "game": {"kind": "bilinear_counterexample", "n": 2, "epsilon": 0.1},
    "methods": ["eg_stochastic"],
    "policy": {"kind": "constant", "eta": 0.5},
    "seeds": [0],
    "budget": {"iterations": 10},
    "record_every": 2,
    "init_scale": 1.0
  })");
}

TEST_F(HarnessTest, MinimalConfigWritesOneTrace) {
  RunOptions opts;
  opts.out = dir_ / "out";
  const RunReport r = run_experiment(parse_experiment(minimal_config()), opts);
  ASSERT_EQ(r.csv_files.size(), 1u);
  const TraceFile t = read_trace_csv(r.csv_files[0]);
  EXPECT_EQ(t.rows.size(), 5u);
  EXPECT_EQ(t.method, "eg_stochastic");
  EXPECT_EQ(t.status, "completed");
  EXPECT_TRUE(fs::exists(r.out_dir / "summary.json"));
  EXPECT_TRUE(fs::exists(r.out_dir / "eg_stochastic_seed0_final.json"));
}

TEST_F(HarnessTest, RerunAndParallelAreByteIdentical) {
  json j = minimal_config();
  j["methods"] = {"altgd", "avg_altgd", "svre", "svre_restarted", "eg_batch"};
  j["seeds"] = {0, 1, 2};
  j["budget"] = {{"iterations", 300}};
  j["record_every"] = 7;
  const ExperimentConfig c = parse_experiment(j);
  RunOptions a, b, p;
  a.out = dir_ / "a";
  b.out = dir_ / "b";
  p.out = dir_ / "p";
  p.parallel = 4;
  const RunReport ra = run_experiment(c, a);
  run_experiment(c, b);
  run_experiment(c, p);
  ASSERT_EQ(ra.csv_files.size(), 15u);
  for (const auto& f : ra.csv_files) {
    const std::string bytes = read_bytes(f);
    EXPECT_EQ(bytes, read_bytes(dir_ / "b" / f.filename()));
    EXPECT_EQ(bytes, read_bytes(dir_ / "p" / f.filename()));
  }
}

TEST_F(HarnessTest, StrictSchemaRejectsMisspelledKeys) {
  json j = minimal_config();
  j["record_evry"] = 3;
  EXPECT_THROW(parse_experiment(j), ConfigError);
  j = minimal_config();
  j["game"]["epsilom"] = 0.1;
  EXPECT_THROW(parse_experiment(j), ConfigError);
  j = minimal_config();
  j["policy"]["beta"] = 0.9;
  EXPECT_THROW(parse_experiment(j), ConfigError);
  j = minimal_config();
  j["methods"] = {"sgd"};
  EXPECT_THROW(parse_experiment(j), ConfigError);
  j = minimal_config();
  j.erase("budget");
  EXPECT_THROW(parse_experiment(j), ConfigError);
  j = minimal_config();
  j["batch_size"] = 3;
  EXPECT_THROW(parse_experiment(j), ConfigError);
  j = minimal_config();
  j["methods"] = {"svre"};
  j["policy"]["kind"] = "adam";
  EXPECT_THROW(parse_experiment(j), ConfigError);
  j = minimal_config();
  j["method_policies"] = {{"svre", {{"eta", 0.1}}}};
  EXPECT_THROW(parse_experiment(j), ConfigError);  // svre is not listed
}

TEST_F(HarnessTest, MethodPoliciesOverrideSharedPolicy) {
  json j = minimal_config();
  j["methods"] = {"svre", "avg_svre", "eg_batch"};
  j["method_policies"] = {{"svre", {{"eta", 0.05}, {"kind", "vrad"}}}};
  const ExperimentConfig c = parse_experiment(j);
  EXPECT_DOUBLE_EQ(policy_for(c, Method::kSVRE).eta_theta, 0.05);
  EXPECT_EQ(policy_for(c, Method::kSVRE).kind, PolicyKind::kVrad);
  EXPECT_DOUBLE_EQ(policy_for(c, Method::kEGBatch).eta_phi, 0.5);
}

TEST_F(HarnessTest, GameSpecRoundTrip) {
  json g = json::parse(R"({"kind": "quadratic", "n": 4, "d": 2, "mu": 0.2, "L": 2.0, "seed": 5,
                           "coupling": [[0.1, 0.0], [0.2, 0.3]]})");
  const GameConfig parsed = game_config_from_json(g);
  const GameConfig again = game_config_from_json(to_json(parsed));
  EXPECT_EQ(to_json(parsed), to_json(again));
  ASSERT_TRUE(again.coupling_matrix.has_value());
  EXPECT_DOUBLE_EQ((*again.coupling_matrix)(1, 0), 0.2);
  EXPECT_EQ(build_game(again)->n(), 4u);
}

TEST_F(HarnessTest, ShippedFig3ConfigMatchesBuiltIn) {
  const ExperimentConfig shipped = load_experiment(fs::path(SVRE_SOURCE_DIR) / "configs" / "fig3.json");
  EXPECT_EQ(config_hash(shipped), config_hash(fig3_experiment()));
  EXPECT_EQ(shipped.seeds, fig3_experiment().seeds);
  for (const char* name : {"minimal.json", "thm2_quadratic.json", "vrad_saga.json"})
    EXPECT_NO_THROW(load_experiment(fs::path(SVRE_SOURCE_DIR) / "configs" / name)) << name;
}

TEST_F(HarnessTest, InitFromRecordedIterate) {
  const Point p(Eigen::VectorXd::Constant(2, 0.25), Eigen::VectorXd::Constant(2, -1.0 / 3.0));
  write_point_json(p, dir_ / "start.json");
  EXPECT_EQ(read_point_json(dir_ / "start.json"), p);
  json j = minimal_config();
  j["init_from"] = "start.json";
  j.erase("init_scale");
  const ExperimentConfig c = parse_experiment(j, dir_);
  const GamePtr g = build_game(c.game);
  const RunConfig rc = make_run_config(c, Method::kEGBatch, 0, *g);
  ASSERT_TRUE(rc.init.has_value());
  EXPECT_EQ(*rc.init, p);
  j["init_from"] = "missing.json";
  EXPECT_THROW(make_run_config(parse_experiment(j, dir_), Method::kEGBatch, 0, *g), IoError);
}

TEST_F(HarnessTest, OutputRootFromEnvironment) {
  ExperimentConfig c = parse_experiment(minimal_config());
  ::setenv("SVRE_OUTPUT_ROOT", dir_.c_str(), 1);
  EXPECT_EQ(resolve_output_dir(c, {}), dir_ / "minimal");
  c.output_dir = "elsewhere";
  EXPECT_EQ(resolve_output_dir(c, {}), dir_ / "elsewhere");
  ::unsetenv("SVRE_OUTPUT_ROOT");
  RunOptions o;
  o.out = dir_ / "x";
  EXPECT_EQ(resolve_output_dir(c, o), dir_ / "x");
}

TEST_F(HarnessTest, CompareReportsDivergence) {
  EXPECT_THROW(compare_traces(dir_), ConfigError);
  json j = minimal_config();
  j["game"] = {{"kind", "affine_bilinear"}, {"n", 4}, {"d", 4}, {"seed", 1}};
  j["methods"] = {"simgd", "eg_batch"};
  j["seeds"] = {0, 1};
  j["budget"] = {{"iterations", 20000}};
  j["record_every"] = 100;
  j["method_policies"] = {{"simgd", {{"eta", 50.0}}}};
  RunOptions o;
  o.out = dir_;
  run_experiment(parse_experiment(j), o);
  const json table = compare_traces(dir_);
  ASSERT_EQ(table["methods"].size(), 2u);
  for (const json& m : table["methods"]) {
    if (m["method"] == "simgd") {
      EXPECT_EQ(m["diverged"], 2);
      EXPECT_TRUE(m["final_distance_mean"].is_null());
    } else {
      EXPECT_EQ(m["diverged"], 0);
      EXPECT_EQ(m["runs"], 2);
    }
  }
  EXPECT_NE(format_comparison(table).find("simgd"), std::string::npos);
}

TEST_F(HarnessTest, TraceCsvRoundTrip) {
  Trace t;
  t.method = "svre";
  t.seed = 3;
  t.n = 10;
  t.initial_distance = 1.0 / 3.0;
  t.iterations = 20;
  t.oracle_calls = 95;
  t.status = RunStatus::kDiverged;
  t.rows.push_back({10, 50, 0.1, 0.2, 0.3, 0.4});
  t.rows.push_back({20, 95, std::numeric_limits<double>::infinity(), 1e300, 0.0, 2.5});
  write_trace_csv(t, "abc", dir_ / "t.csv");
  const TraceFile back = read_trace_csv(dir_ / "t.csv");
  EXPECT_EQ(back.method, "svre");
  EXPECT_EQ(back.seed, 3u);
  EXPECT_EQ(back.initial_distance, 1.0 / 3.0);
  EXPECT_EQ(back.status, "diverged");
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_TRUE(std::isinf(back.rows[1].distance_to_nash));
  EXPECT_EQ(back.rows[0].sme_player2, 0.3);
  write("bad.csv", "iteration,oracle_calls\n1,2\n");
  EXPECT_THROW(read_trace_csv(dir_ / "bad.csv"), ConfigError);
}

int cli(const std::string& args) {
  const int status = std::system((std::string(SVRE_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(HarnessTest, CliExitCodes) {
  EXPECT_EQ(cli("verify unknown"), 1);
  EXPECT_EQ(cli("verify policies"), 0);
  EXPECT_EQ(cli("run " + (dir_ / "missing.json").string()), 2);
  const fs::path bad = write("bad.json", R"({"name": "x", "gmae": {}})");
  EXPECT_EQ(cli("run " + bad.string()), 1);
  const fs::path good = write("good.json", minimal_config().dump());
  EXPECT_EQ(cli("run " + good.string() + " --seeds 4,5 --out " + (dir_ / "o").string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "o" / "eg_stochastic_seed5.csv"));
  EXPECT_EQ(cli("compare " + (dir_ / "o").string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "o" / "compare.json"));
  fs::create_directories(dir_ / "empty");
  EXPECT_EQ(cli("compare " + (dir_ / "empty").string()), 1);
}

}  // namespace
}  // namespace svre
