#include "catdisc/pipeline.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

using namespace catdisc;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string scenarios = CATDISC_SCENARIOS;

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json minimal_ruled() {
  return json::parse(R"({
    "schema_version": 1,
    "seed": 7,
    "target": {"backend": "euclidean", "dim": 2},
    "kappa": 0,
    "construction": {"kind": "ruled", "eta0": [[0, 0], [1, 0]], "eta1": [[0, 1], [1, 1]]},
    "refinements": [4]
  })");
}

std::string schema_path(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const SchemaError& e) {
    return e.path();
  }
  return "<accepted>";
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("catdisc_pipeline_" + name);
  fs::remove_all(dir);
  return dir;
}

// Runs the CLI with an optional CATDISC_OUT value; returns the exit code.
int run_cli(const std::string& args, const std::string& env_out = "") {
  std::string cmd = env_out.empty() ? "env -u CATDISC_OUT " : "env CATDISC_OUT='" + env_out + "' ";
  cmd += std::string(CATDISC_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Schema, MinimalRuledScenarioParses) {
  const ScenarioConfig cfg = parse_scenario(minimal_ruled());
  ASSERT_TRUE(cfg.construction.has_value());
  EXPECT_EQ(cfg.construction->kind, ConstructionKind::ruled);
  EXPECT_EQ(cfg.refinements, std::vector<int>{4});
  EXPECT_EQ(cfg.config_hash.size(), 16u);
}

TEST(Schema, ErrorsNameTheField) {
  json doc = minimal_ruled();
  doc["budgets"] = {{"triples", "many"}};
  EXPECT_EQ(schema_path(doc), "budgets.triples");

  doc = minimal_ruled();
  doc["construction"]["eta0"] = json::parse("[[0, 0], [1, 0], [2, 0], [3]]");
  EXPECT_EQ(schema_path(doc), "construction.eta0[3]");

  doc = minimal_ruled();
  doc["schema_version"] = 99;
  EXPECT_EQ(schema_path(doc), "schema_version");

  doc = minimal_ruled();
  doc["colour"] = "red";
  EXPECT_EQ(schema_path(doc), "colour");

  doc = minimal_ruled();
  doc["target"]["backend"] = "banach";
  EXPECT_EQ(schema_path(doc), "target.backend");

  doc = minimal_ruled();
  doc["refinements"] = json::array({1});
  EXPECT_EQ(schema_path(doc), "refinements[0]");
}

TEST(Schema, MissingFileIsASchemaError) { EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), SchemaError); }

TEST(ConfigHash, IgnoresOutputDirAndKeyOrder) {
  json a = minimal_ruled();
  json b = json::parse(R"({
    "refinements": [4],
    "construction": {"eta1": [[0, 1], [1, 1]], "eta0": [[0, 0], [1, 0]], "kind": "ruled"},
    "kappa": 0,
    "target": {"dim": 2, "backend": "euclidean"},
    "seed": 7,
    "schema_version": 1
  })");
  b["output_dir"] = "/somewhere/else";
  EXPECT_EQ(config_hash(a), config_hash(b));
  a["seed"] = 5;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(RunScenario, ReportEmbedsHashAndSeed) {
  const ScenarioConfig cfg = load_scenario(scenarios + "/model_plane.json");
  const RunResult r = run_scenario(cfg, Subcommand::cat_check);
  ASSERT_FALSE(r.artifacts.empty());
  EXPECT_EQ(r.artifacts.front().name, "report.json");
  const json report = json::parse(r.artifacts.front().content);
  EXPECT_EQ(report.at("config_hash"), cfg.config_hash);
  EXPECT_EQ(report.at("seed").get<std::uint64_t>(), cfg.seed);
  EXPECT_EQ(report.at("passed").get<bool>(), r.passed);
}

TEST(RunScenario, ArtifactsAreByteIdenticalOnRerun) {
  for (const char* name : {"cone_narrow.json", "harmonic_tripod.json", "minimize_quad.json"}) {
    const ScenarioConfig cfg = load_scenario(scenarios + "/" + name);
    const Subcommand sub = cfg.construction && cfg.construction->kind == ConstructionKind::harmonic
                               ? Subcommand::verify_harmonic
                               : (cfg.construction ? Subcommand::minimize_graph : Subcommand::cat_check);
    const RunResult a = run_scenario(cfg, sub);
    const RunResult b = run_scenario(cfg, sub);
    ASSERT_EQ(a.artifacts.size(), b.artifacts.size()) << name;
    for (std::size_t k = 0; k < a.artifacts.size(); ++k) {
      EXPECT_EQ(a.artifacts[k].name, b.artifacts[k].name);
      EXPECT_EQ(a.artifacts[k].content, b.artifacts[k].content) << name << " " << a.artifacts[k].name;
    }
  }
}

TEST(RunScenario, MismatchedConstructionIsASchemaError) {
  const ScenarioConfig cfg = load_scenario(scenarios + "/harmonic_plane.json");
  EXPECT_THROW(run_scenario(cfg, Subcommand::verify_ruled), SchemaError);
}

TEST(Cli, ExitCodes) {
  const fs::path out = scratch("codes");
  EXPECT_EQ(run_cli("cat-check " + scenarios + "/model_plane.json --out " + out.string()), 0);
  EXPECT_EQ(run_cli("cat-check " + scenarios + "/cone_narrow.json --out " + out.string()), 1);
  EXPECT_FALSE(read_json(out / "report.json").at("passed").get<bool>());

  const fs::path bad = out / "bad.json";
  json doc = minimal_ruled();
  doc["budgets"] = {{"triples", -3}};
  std::ofstream(bad) << doc.dump();
  EXPECT_EQ(run_cli("verify-ruled " + bad.string() + " --out " + out.string()), 2);
  EXPECT_EQ(run_cli("no-such-subcommand " + bad.string()), 2);
}

TEST(Cli, OutputDirectoryPrecedence) {
  const fs::path env_dir = scratch("env");
  const fs::path flag_dir = scratch("flag");
  const std::string cfg = scenarios + "/model_sphere.json";
  ASSERT_EQ(run_cli("cat-check " + cfg, env_dir.string()), 0);
  EXPECT_TRUE(fs::exists(env_dir / "report.json"));
  ASSERT_EQ(run_cli("cat-check " + cfg + " --out " + flag_dir.string(), env_dir.string() + "_unused"), 0);
  EXPECT_TRUE(fs::exists(flag_dir / "report.json"));
  EXPECT_FALSE(fs::exists(env_dir.string() + "_unused"));
}

TEST(Cli, RerunIsBitIdentical) {
  const fs::path a = scratch("rerun_a");
  const fs::path b = scratch("rerun_b");
  const std::string cfg = scenarios + "/harmonic_tripod.json";
  ASSERT_EQ(run_cli("verify-harmonic " + cfg + " --out " + a.string()), 0);
  ASSERT_EQ(run_cli("verify-harmonic " + cfg + " --out " + b.string()), 0);
  for (const auto& entry : fs::directory_iterator(a)) {
    const fs::path other = b / entry.path().filename();
    ASSERT_TRUE(fs::exists(other));
    EXPECT_EQ(read_file(entry.path()), read_file(other)) << entry.path().filename();
  }
}

TEST(Cli, ReportVerdictMatchesExitCode) {
  const fs::path out = scratch("verdict");
  for (const char* name : {"cone_wide.json", "cone_narrow.json", "model_hyperbolic.json"}) {
    const int code = run_cli("cat-check " + scenarios + "/" + name + " --out " + out.string());
    const json report = read_json(out / "report.json");
    EXPECT_EQ(report.at("passed").get<bool>(), code == 0) << name;
    EXPECT_EQ(report.at("config_hash"), load_scenario(scenarios + "/" + name).config_hash);
  }
}
