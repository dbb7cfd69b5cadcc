#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "catdisc/defaults.hpp"
#include "catdisc/pipeline.hpp"

namespace {

constexpr int exit_failure = 1;
constexpr int exit_schema = 2;

bool write_artifacts(const std::filesystem::path& dir, const catdisc::RunResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::cerr << "cannot create " << dir.string() << ": " << ec.message() << "\n";
    return false;
  }
  for (const auto& a : result.artifacts) {
    std::ofstream out(dir / a.name, std::ios::binary);
    out << a.content;
    if (!out) {
      std::cerr << "cannot write " << (dir / a.name).string() << "\n";
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale CAT(k) verification of minimal discs"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  for (auto sub : {catdisc::Subcommand::verify_ruled, catdisc::Subcommand::verify_harmonic,
                   catdisc::Subcommand::minimize_graph, catdisc::Subcommand::build_polyhedral,
                   catdisc::Subcommand::cat_check}) {
    CLI::App* cmd = app.add_subcommand(catdisc::to_string(sub));
    cmd->add_option("config", config_path, "scenario JSON file")->required();
    cmd->add_option("--out", out_dir, std::string("output directory (overrides $") + catdisc::defaults::output_dir_env +
                                          " and the config's output_dir)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_schema;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  const catdisc::Subcommand sub = *catdisc::parse_subcommand(name);

  catdisc::RunResult result;
  std::string dir;
  try {
    const catdisc::ScenarioConfig cfg = catdisc::load_scenario(config_path);
    dir = cfg.output_dir;
    if (const char* env = std::getenv(catdisc::defaults::output_dir_env); env && *env) dir = env;
    if (!out_dir.empty()) dir = out_dir;
    result = catdisc::run_scenario(cfg, sub);
  } catch (const catdisc::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return exit_schema;
  }
  if (!write_artifacts(dir, result)) return exit_failure;

  if (result.passed) {
    std::cout << "PASS " << name << " -> " << dir << "\n";
    return 0;
  }
  if (!result.failed_stage.empty()) {
    std::cout << "FAIL " << name << " [stage " << result.failed_stage << "] " << result.error << "\n";
  } else {
    std::cout << "FAIL " << name << " [checks]";
    for (const auto& c : result.failed_checks) std::cout << " " << c;
    std::cout << "\n";
  }
  return exit_failure;
}
