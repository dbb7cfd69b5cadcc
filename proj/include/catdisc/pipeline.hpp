#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "catdisc/defaults.hpp"
#include "catdisc/graph_minimizer.hpp"
#include "catdisc/target_space.hpp"

namespace catdisc {

// A scenario file that does not match the schema; `path` names the field,
// e.g. "budgets.triples" or "construction.eta0[3]".
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class ConstructionKind { ruled, harmonic, custom };

const char* to_string(ConstructionKind kind);

struct ConstructionConfig {
  ConstructionKind kind = ConstructionKind::ruled;
  std::vector<TargetPoint> eta0;     // ruled
  std::vector<TargetPoint> eta1;     // ruled
  std::vector<TargetPoint> corners;  // harmonic: images of the square corners
  std::vector<TargetPoint> trace;    // harmonic: explicit boundary trace (single level)
  bool axis_weights = true;          // harmonic: five-point stencil weights
  std::vector<TargetPoint> images;   // custom: one per grid vertex (single level)
  double perturb = 0.0;              // minimize-graph: interior displacement fraction
  bool relax = true;                 // build-polyhedral: relax before building
  bool minimize = true;              // verify-*: graph-minimizer diagnostics
  bool polyhedral = false;           // verify-*: polyhedral build at each level
  bool require_monotone_defects = false;
};

struct Budgets {
  int triples = defaults::triple_budget;
  int thinness_grid = defaults::thinness_grid;
  int steiner_refinement = defaults::steiner_refinement;
  int metric_pairs = defaults::metric_pair_budget;
  int lipschitz_pairs = defaults::lipschitz_pairs;
  int density_samples = defaults::density_samples;
  int loops = defaults::loop_probe_count;
  int loop_iterations = defaults::loop_probe_iters;
  int relax_max_iters = defaults::max_iters;
  int harmonic_max_sweeps = defaults::harmonic_max_sweeps;
  int q_grid = defaults::q_grid;
};

struct Tolerances {
  std::optional<double> defect;  // default depends on the subcommand
  double tol_move = defaults::tol_move;
  double harmonic = defaults::harmonic_tolerance;
  double angle_sum = defaults::angle_sum_tolerance;
  double interior_angle = defaults::interior_angle_tolerance;
  double lipschitz_slack = defaults::lipschitz_slack;
};

struct Outputs {
  bool samples_csv = false;
  bool svg = true;
  bool distance_tables = false;
};

struct ScenarioConfig {
  int schema_version = defaults::schema_version;
  std::optional<ConstructionConfig> construction;
  TargetSpace target = TargetSpace::euclidean(2);
  double kappa = 0.0;
  int grid_a = 8;
  int grid_t = 8;
  std::vector<int> refinements{8, 16, 32};
  Budgets budgets;
  Tolerances tolerances;
  Outputs outputs;
  std::uint64_t seed = defaults::seed;
  std::string output_dir = defaults::output_dir;
  std::string config_hash;  // FNV-1a 64 of the canonical JSON without output_dir
};

// Throws SchemaError.
ScenarioConfig parse_scenario(const nlohmann::json& doc);
ScenarioConfig load_scenario(const std::string& path);

std::string config_hash(const nlohmann::json& doc);

struct Artifact {
  std::string name;  // file name relative to the output directory
  std::string content;
};

struct RunResult {
  bool passed = false;
  std::vector<std::string> failed_checks;
  std::string failed_stage;  // set when a stage threw
  std::string error;
  std::vector<Artifact> artifacts;  // report.json first
};

enum class Subcommand { verify_ruled, verify_harmonic, minimize_graph, build_polyhedral, cat_check };

const char* to_string(Subcommand sub);
std::optional<Subcommand> parse_subcommand(const std::string& name);

// Runs one subcommand. Schema problems specific to the subcommand (missing
// or mismatched construction) throw SchemaError; stage errors are caught and
// reported in the result.
RunResult run_scenario(const ScenarioConfig& cfg, Subcommand sub);

}  // namespace catdisc
