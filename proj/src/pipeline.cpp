#include "catdisc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include "catdisc/cat_verifier.hpp"
#include "catdisc/constructions.hpp"
#include "catdisc/error.hpp"
#include "catdisc/induced_metric.hpp"
#include "catdisc/json_io.hpp"
#include "catdisc/polyhedral_builder.hpp"
#include "catdisc/rng.hpp"
#include "catdisc/svg.hpp"

namespace catdisc {

const char* to_string(ConstructionKind kind) {
  switch (kind) {
    case ConstructionKind::ruled: return "ruled";
    case ConstructionKind::harmonic: return "harmonic";
    case ConstructionKind::custom: return "custom";
  }
  return "unknown";
}

const char* to_string(Subcommand sub) {
  switch (sub) {
    case Subcommand::verify_ruled: return "verify-ruled";
    case Subcommand::verify_harmonic: return "verify-harmonic";
    case Subcommand::minimize_graph: return "minimize-graph";
    case Subcommand::build_polyhedral: return "build-polyhedral";
    case Subcommand::cat_check: return "cat-check";
  }
  return "unknown";
}

std::optional<Subcommand> parse_subcommand(const std::string& name) {
  for (Subcommand s : {Subcommand::verify_ruled, Subcommand::verify_harmonic, Subcommand::minimize_graph,
                       Subcommand::build_polyhedral, Subcommand::cat_check}) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

// An object whose keys are all consumed exactly once; anything left over is
// an unknown field.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_.empty() ? "$" : path_, "expected an object");
  }

  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const { return join(path_, key); }
  bool has(const std::string& key) const { return j_.contains(key); }

  const json& get(const std::string& key) {
    if (!j_.contains(key)) throw SchemaError(at(key), "required field is missing");
    used_.insert(key);
    return j_.at(key);
  }

  const json* find(const std::string& key) {
    if (!j_.contains(key)) return nullptr;
    used_.insert(key);
    return &j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) throw SchemaError(at(key), "expected a finite number");
    return v.get<double>();
  }

  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  double positive(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) throw SchemaError(at(key), "must be > 0");
    return x;
  }

  int integer(const std::string& key, int fallback, int min) {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_number_integer()) throw SchemaError(at(key), "expected an integer");
    const auto x = v.get<long long>();
    if (x < min || x > std::numeric_limits<int>::max()) {
      throw SchemaError(at(key), "must be an integer >= " + std::to_string(min));
    }
    return static_cast<int>(x);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_boolean()) throw SchemaError(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string()) throw SchemaError(at(key), "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw SchemaError(at(key), "unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

double finite_number(const json& v, const std::string& path) {
  if (!v.is_number() || !std::isfinite(v.get<double>())) throw SchemaError(path, "expected a finite number");
  return v.get<double>();
}

int integer_value(const json& v, const std::string& path, int min) {
  if (!v.is_number_integer() || v.get<long long>() < min || v.get<long long>() > std::numeric_limits<int>::max()) {
    throw SchemaError(path, "expected an integer >= " + std::to_string(min));
  }
  return v.get<int>();
}

std::vector<double> number_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(finite_number(v[i], index(path, i)));
  return out;
}

TargetSpace parse_target(const json& j, const std::string& path) {
  Fields f(j, path);
  const std::string backend = f.string("backend");
  std::optional<TargetSpace> space;
  try {
    if (backend == "model") {
      space = TargetSpace::model(f.number("kappa"));
    } else if (backend == "euclidean") {
      space = TargetSpace::euclidean(f.integer("dim", 2, 1));
    } else if (backend == "tree") {
      const json& edges = f.get("edges");
      const std::string epath = f.at("edges");
      if (!edges.is_array() || edges.empty()) throw SchemaError(epath, "expected a non-empty array of [u, v, weight]");
      std::vector<TreeEdge> list;
      for (std::size_t i = 0; i < edges.size(); ++i) {
        const json& e = edges[i];
        const std::string ep = index(epath, i);
        if (!e.is_array() || e.size() != 3) throw SchemaError(ep, "expected [u, v, weight]");
        list.push_back(TreeEdge{integer_value(e[0], index(ep, 0), 0), integer_value(e[1], index(ep, 1), 0),
                                finite_number(e[2], index(ep, 2))});
      }
      space = TargetSpace::tree(std::move(list));
    } else if (backend == "cone") {
      space = TargetSpace::cone(f.number("theta"));
    } else {
      throw SchemaError(f.at("backend"), "expected one of model, euclidean, tree, cone");
    }
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
  f.finish();
  return *space;
}

TargetPoint parse_point(const TargetSpace& space, const json& j, const std::string& path) {
  TargetPoint p;
  switch (space.kind()) {
    case BackendKind::model: {
      if (j.is_object()) {
        Fields f(j, path);
        const std::vector<double> polar = number_array(f.get("polar"), f.at("polar"));
        if (polar.size() != 2) throw SchemaError(f.at("polar"), "expected [distance, direction]");
        f.finish();
        if (polar[0] < 0.0) throw SchemaError(index(f.at("polar"), 0), "distance must be >= 0");
        p = model_polar(*space.model_kappa(), polar[0], polar[1]);
      } else {
        const std::vector<double> c = number_array(j, path);
        if (c.size() != 3) throw SchemaError(path, "expected [x, y, z] or {\"polar\": [distance, direction]}");
        p = ModelPoint{{c[0], c[1], c[2]}};
      }
      break;
    }
    case BackendKind::euclidean: {
      std::vector<double> c = number_array(j, path);
      if (static_cast<int>(c.size()) != space.euclidean_dim()) {
        throw SchemaError(path, "expected " + std::to_string(space.euclidean_dim()) + " coordinates");
      }
      p = EuclideanPoint{std::move(c)};
      break;
    }
    case BackendKind::tree: {
      const MetricTree& tree = *space.as_tree();
      Fields f(j, path);
      try {
        if (f.has("vertex")) {
          p = tree.vertex_point(f.integer("vertex", 0, 0));
        } else if (f.has("from")) {
          p = tree.point_on(f.integer("from", 0, 0), f.integer("to", 0, 0), f.number("offset"));
        } else {
          p = TreePoint{f.integer("edge", 0, 0), f.number("offset")};
        }
      } catch (const Error& e) {
        throw SchemaError(path, e.what());
      }
      f.finish();
      break;
    }
    case BackendKind::cone: {
      const std::vector<double> c = number_array(j, path);
      if (c.size() != 2) throw SchemaError(path, "expected [radius, angle]");
      p = ConePoint{c[0], c[1]};
      break;
    }
  }
  try {
    space.validate(p);
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
  return p;
}

std::vector<TargetPoint> parse_points(const TargetSpace& space, const json& j, const std::string& path,
                                      std::size_t min_count) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of points");
  if (j.size() < min_count) throw SchemaError(path, "expected at least " + std::to_string(min_count) + " points");
  std::vector<TargetPoint> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_point(space, j[i], index(path, i)));
  return out;
}

ConstructionConfig parse_construction(const TargetSpace& space, const json& j, const std::string& path) {
  Fields f(j, path);
  ConstructionConfig c;
  const std::string kind = f.string("kind");
  if (kind == "ruled") {
    c.kind = ConstructionKind::ruled;
    c.eta0 = parse_points(space, f.get("eta0"), f.at("eta0"), 2);
    c.eta1 = parse_points(space, f.get("eta1"), f.at("eta1"), 2);
  } else if (kind == "harmonic") {
    c.kind = ConstructionKind::harmonic;
    if (f.has("corners") == f.has("trace")) {
      throw SchemaError(f.at("corners"), "give exactly one of corners and trace");
    }
    if (f.has("corners")) {
      c.corners = parse_points(space, f.get("corners"), f.at("corners"), 4);
      if (c.corners.size() != 4) throw SchemaError(f.at("corners"), "expected 4 corner images");
    } else {
      c.trace = parse_points(space, f.get("trace"), f.at("trace"), 4);
    }
    if (f.has("weights")) {
      const std::string w = f.string("weights");
      if (w != "axis" && w != "unit") throw SchemaError(f.at("weights"), "expected \"axis\" or \"unit\"");
      c.axis_weights = w == "axis";
    }
  } else if (kind == "custom") {
    c.kind = ConstructionKind::custom;
    c.images = parse_points(space, f.get("images"), f.at("images"), 4);
  } else {
    throw SchemaError(f.at("kind"), "expected one of ruled, harmonic, custom");
  }
  c.perturb = f.number("perturb", 0.0);
  if (c.perturb < 0.0 || c.perturb >= 1.0) throw SchemaError(f.at("perturb"), "must lie in [0, 1)");
  c.relax = f.boolean("relax", c.relax);
  c.minimize = f.boolean("minimize", c.minimize);
  c.polyhedral = f.boolean("polyhedral", c.polyhedral);
  c.require_monotone_defects = f.boolean("require_monotone_defects", c.require_monotone_defects);
  f.finish();
  return c;
}

Budgets parse_budgets(const json& j, const std::string& path) {
  Fields f(j, path);
  Budgets b;
  b.triples = f.integer("triples", b.triples, 1);
  b.thinness_grid = f.integer("thinness_grid", b.thinness_grid, 2);
  b.steiner_refinement = f.integer("steiner_refinement", b.steiner_refinement, 0);
  b.metric_pairs = f.integer("metric_pairs", b.metric_pairs, 1);
  b.lipschitz_pairs = f.integer("lipschitz_pairs", b.lipschitz_pairs, 1);
  b.density_samples = f.integer("density_samples", b.density_samples, 1);
  b.loops = f.integer("loops", b.loops, 0);
  b.loop_iterations = f.integer("loop_iterations", b.loop_iterations, 1);
  b.relax_max_iters = f.integer("relax_max_iters", b.relax_max_iters, 1);
  b.harmonic_max_sweeps = f.integer("harmonic_max_sweeps", b.harmonic_max_sweeps, 1);
  b.q_grid = f.integer("q_grid", b.q_grid, 1);
  f.finish();
  return b;
}

Tolerances parse_tolerances(const json& j, const std::string& path) {
  Fields f(j, path);
  Tolerances t;
  if (f.has("defect")) t.defect = f.positive("defect", 1.0);
  t.tol_move = f.positive("tol_move", t.tol_move);
  t.harmonic = f.positive("harmonic", t.harmonic);
  t.angle_sum = f.positive("angle_sum", t.angle_sum);
  t.interior_angle = f.positive("interior_angle", t.interior_angle);
  t.lipschitz_slack = f.positive("lipschitz_slack", t.lipschitz_slack);
  f.finish();
  return t;
}

Outputs parse_outputs(const json& j, const std::string& path) {
  Fields f(j, path);
  Outputs o;
  o.samples_csv = f.boolean("samples_csv", o.samples_csv);
  o.svg = f.boolean("svg", o.svg);
  o.distance_tables = f.boolean("distance_tables", o.distance_tables);
  f.finish();
  return o;
}

}  // namespace

std::string config_hash(const nlohmann::json& doc) {
  nlohmann::json canonical = doc;
  if (canonical.is_object()) canonical.erase("output_dir");
  const std::string text = canonical.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ScenarioConfig parse_scenario(const nlohmann::json& doc) {
  Fields f(doc, "");
  ScenarioConfig cfg;
  cfg.schema_version = f.integer("schema_version", -1, 0);
  if (!f.has("schema_version")) throw SchemaError("schema_version", "required field is missing");
  if (cfg.schema_version != defaults::schema_version) {
    throw SchemaError("schema_version", "unsupported version " + std::to_string(cfg.schema_version) + ", expected " +
                                            std::to_string(defaults::schema_version));
  }
  cfg.target = parse_target(f.get("target"), "target");
  cfg.kappa = f.number("kappa");
  const json& seed = f.get("seed");
  if (!seed.is_number_integer() || (seed.is_number_integer() && !seed.is_number_unsigned() && seed.get<long long>() < 0)) {
    throw SchemaError("seed", "expected a non-negative integer");
  }
  cfg.seed = seed.get<std::uint64_t>();
  if (const json* c = f.find("construction")) cfg.construction = parse_construction(cfg.target, *c, "construction");
  if (const json* g = f.find("grid")) {
    if (g->is_array()) {
      if (g->size() != 2) throw SchemaError("grid", "expected n or [columns, rows]");
      cfg.grid_a = integer_value((*g)[0], "grid[0]", 2);
      cfg.grid_t = integer_value((*g)[1], "grid[1]", 2);
    } else {
      cfg.grid_a = cfg.grid_t = integer_value(*g, "grid", 2);
    }
  }
  if (const json* r = f.find("refinements")) {
    if (!r->is_array() || r->empty()) throw SchemaError("refinements", "expected a non-empty array of grid sizes");
    cfg.refinements.clear();
    for (std::size_t i = 0; i < r->size(); ++i) cfg.refinements.push_back(integer_value((*r)[i], index("refinements", i), 2));
  }
  if (const json* b = f.find("budgets")) cfg.budgets = parse_budgets(*b, "budgets");
  if (const json* t = f.find("tolerances")) cfg.tolerances = parse_tolerances(*t, "tolerances");
  if (const json* o = f.find("outputs")) cfg.outputs = parse_outputs(*o, "outputs");
  if (f.has("output_dir")) cfg.output_dir = f.string("output_dir");
  f.finish();
  if (cfg.construction && cfg.construction->kind == ConstructionKind::custom &&
      cfg.construction->images.size() != static_cast<std::size_t>(cfg.grid_a) * cfg.grid_t) {
    throw SchemaError("construction.images", "expected one image per vertex of the " + std::to_string(cfg.grid_a) +
                                                 " x " + std::to_string(cfg.grid_t) + " grid");
  }
  cfg.config_hash = config_hash(doc);
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("$", "cannot read " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("$", std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

namespace {

// A stage error: the tag names the pipeline step that threw.
struct StageFailure {
  std::string stage;
  std::string what;
};

template <class F>
auto stage(const std::string& tag, F&& body) {
  try {
    return body();
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageFailure{tag, e.what()};
  }
}

// Collects named boolean checks in order.
class Verdict {
 public:
  void check(const std::string& name, bool ok) {
    if (!ok) failed_.push_back(name);
  }
  const std::vector<std::string>& failed() const { return failed_; }
  bool passed() const { return failed_.empty(); }

 private:
  std::vector<std::string> failed_;
};

std::string text(const Json& j) { return j.dump(2) + "\n"; }

std::string sci(double x) {
  if (!std::isfinite(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double chart_kappa(const ScenarioConfig& cfg) { return cfg.target.curvature_bound().value_or(cfg.kappa); }

const ConstructionConfig& need_construction(const ScenarioConfig& cfg, std::optional<ConstructionKind> kind,
                                            Subcommand sub) {
  if (!cfg.construction) throw SchemaError("construction", std::string(to_string(sub)) + " needs a construction");
  if (kind && cfg.construction->kind != *kind) {
    throw SchemaError("construction.kind", std::string(to_string(sub)) + " needs a " + to_string(*kind) +
                                               " construction");
  }
  return *cfg.construction;
}

struct LevelMap {
  MappedGraph graph;
  Json construction;
  std::vector<std::string> failed;  // construction checks that did not pass
  std::vector<double> energy_trace;
};

LevelMap build_map(const ScenarioConfig& cfg, int n_a, int n_t) {
  const ConstructionConfig& c = *cfg.construction;
  switch (c.kind) {
    case ConstructionKind::ruled: {
      RuledDisc disc = stage("construction", [&] {
        return ruled_disc_map(RuledDiscSpec{cfg.target, c.eta0, c.eta1, n_a, n_t});
      });
      const RuledMinimalityReport minimal = stage("construction", [&] { return ruled_is_length_minimizing_check(disc); });
      const QuadrangleReport quad = stage("construction", [&] { return quadrangle_bound_check(disc); });
      LevelMap out{disc.graph, Json::object(), {}, {}};
      out.construction["kind"] = "ruled";
      out.construction["columns"] = to_json(minimal);
      out.construction["quadrangle"] = to_json(quad);
      if (!minimal.passed) out.failed.push_back("construction.columns");
      if (!quad.finite) out.failed.push_back("construction.quadrangle");
      return out;
    }
    case ConstructionKind::harmonic: {
      auto mesh = std::make_shared<const DiscMesh>(DiscMesh::grid(n_a, n_t));
      std::vector<TargetPoint> trace = c.trace;
      if (trace.empty()) {
        trace = stage("construction", [&] { return square_boundary_trace(cfg.target, *mesh, c.corners); });
      } else if (trace.size() != mesh->boundary_vertices().size()) {
        throw SchemaError("construction.trace", "expected " + std::to_string(mesh->boundary_vertices().size()) +
                                                    " boundary images for the " + std::to_string(n_a) + " x " +
                                                    std::to_string(n_t) + " grid");
      }
      HarmonicSpec spec{mesh, cfg.target, std::move(trace), {}, cfg.tolerances.harmonic,
                        cfg.budgets.harmonic_max_sweeps};
      if (!c.axis_weights) spec.weights.assign(mesh->edge_count(), 1.0);
      HarmonicResult res = stage("construction", [&] { return harmonic_relax(spec); });
      bool descent = true;
      for (std::size_t k = 1; k < res.energy_trace.size(); ++k) descent = descent && res.energy_trace[k] <= res.energy_trace[k - 1];
      const EdgeModulus modulus = edge_modulus(res.graph);
      const double h = 1.0 / (std::max(n_a, n_t) - 1);
      LevelMap out{res.graph, Json::object(), {}, res.energy_trace};
      out.construction["kind"] = "harmonic";
      out.construction["energy_model"] = c.axis_weights
                                             ? "discrete Dirichlet energy, unit weights on axis edges (five-point stencil)"
                                             : "discrete Dirichlet energy, unit weights on all mesh edges";
      out.construction["sweeps"] = res.sweeps;
      out.construction["converged"] = res.converged;
      out.construction["initial_energy"] = res.energy_trace.front();
      out.construction["final_energy"] = res.energy_trace.back();
      out.construction["energy_non_increasing"] = descent;
      out.construction["interior_modulus"] = modulus.interior;
      out.construction["edge_modulus"] = modulus.all;
      out.construction["mesh_size"] = h;
      out.construction["regularity_constant"] = modulus.interior / h;
      if (!res.converged) out.failed.push_back("construction.converged");
      if (!descent) out.failed.push_back("construction.energy_descent");
      return out;
    }
    case ConstructionKind::custom: {
      if (n_a != cfg.grid_a || n_t != cfg.grid_t) {
        throw SchemaError("refinements", "a custom map has images for one grid only");
      }
      auto mesh = std::make_shared<const DiscMesh>(DiscMesh::grid(n_a, n_t));
      MappedGraph mg = stage("construction", [&] { return MappedGraph::make(mesh, cfg.target, c.images); });
      return LevelMap{std::move(mg), Json{{"kind", "custom"}}, {}, {}};
    }
  }
  throw SchemaError("construction.kind", "unknown construction");
}

// Moves each free vertex a random fraction (up to `fraction`) of the way
// towards a random neighbor's image.
MappedGraph perturbed(const MappedGraph& mg, double fraction, std::uint64_t seed) {
  if (fraction <= 0.0) return mg;
  Rng rng(seed ^ 0x5bd1e9955bd1e995ULL);
  std::vector<TargetPoint> images = mg.images;
  for (int v : mg.free_vertices()) {
    const auto& nb = mg.mesh->neighbors(v);
    if (nb.empty()) continue;
    const int w = nb[rng.index(nb.size())];
    images[v] = mg.space.geodesic_checked(mg.images[v], mg.images[w], fraction * rng.uniform()).point;
  }
  return MappedGraph::make(mg.mesh, mg.space, std::move(images), mg.fixed);
}

Json metric_block(const MappedGraph& mg, const ScenarioConfig& cfg, Verdict& verdict, const std::string& prefix,
                  const QuotientMetric* precomputed = nullptr) {
  const QuotientMetric qm =
      precomputed ? *precomputed : stage("induced-metric", [&] { return induced_length_metric(mg); });
  const MonotoneQuotientReport mono = monotone_quotient_check(*mg.mesh, qm);
  const double excess = induced_map_lipschitz_excess(mg, qm);
  const MetricComparison cmp =
      stage("metric-comparison", [&] { return compare_metrics(mg, qm, cfg.budgets.metric_pairs, cfg.seed); });
  verdict.check(prefix + ".monotone_quotient", mono.passed);
  verdict.check(prefix + ".connecting_le_length", cmp.passed);
  verdict.check(prefix + ".induced_map_lipschitz", excess <= 1e-9);
  return {{"monotone_quotient", to_json(mono)}, {"induced_map_lipschitz_excess", excess}, {"comparison", to_json(cmp)}};
}

Json polyhedral_block(const MappedGraph& mg, const ScenarioConfig& cfg, Verdict& verdict, const std::string& prefix,
                      std::optional<BuiltDisc>* keep = nullptr) {
  BuiltDisc built = stage("polyhedral-build", [&] {
    BuildOptions opts;
    opts.q_grid = cfg.budgets.q_grid;
    return build_polyhedral_disc(mg, Kappa(chart_kappa(cfg)), opts);
  });
  const PolyComplex& w = built.complex;
  const int steiner = cfg.budgets.steiner_refinement;
  Json j;
  j["chart_kappa"] = built.chart_kappa;
  j["epsilon"] = built.epsilon;
  j["triangles"] = w.mesh().triangle_count();
  j["vertex_classes"] = w.vertex_count();
  j["gluing_defect"] = w.gluing_defect();
  stage("polyhedral-checks", [&] {
    const SideCoherenceReport sides = side_coherence_check(w, mg);
    const CornerComparisonReport corners = corner_angle_comparison(w, mg);
    const AngleReport interior = interior_angle_check(w);
    const LipschitzReport lip =
        lipschitz_check(built.maps, w, mg, cfg.budgets.lipschitz_pairs, cfg.seed, steiner, cfg.tolerances.lipschitz_slack);
    const DensityReport density =
        epsilon_density_check(built.maps, w, built.epsilon, cfg.budgets.density_samples, cfg.seed, steiner);
    const FiberReport fibers = fiber_connectivity_check(w);
    double agreement = 0.0;
    for (int v = 0; v < mg.vertex_count(); ++v) {
      if (!mg.is_fixed(v)) continue;
      const PolyPoint& pv = built.maps.vertex_points[v];
      const Triangle& tri = mg.mesh->triangles()[pv.triangle];
      std::array<double, 3> weights{};
      for (int k = 0; k < 3; ++k) weights[k] = tri[k] == v ? 1.0 : 0.0;
      agreement = std::max(agreement, mg.space.distance(built.maps.image(mg, pv.triangle, weights), mg.images[v]));
    }
    const PolyCertificate cert = certify_complex(w, cfg.budgets.loops, cfg.budgets.loop_iterations, cfg.seed);
    j["side_coherence"] = to_json(sides);
    j["corner_angles"] = to_json(corners);
    j["interior_angles"] = to_json(interior);
    j["lipschitz"] = to_json(lip);
    j["density"] = to_json(density);
    j["fibers"] = to_json(fibers);
    j["boundary_agreement"] = agreement;
    j["certificate"] = to_json(cert);
    verdict.check(prefix + ".side_coherence", sides.passed);
    verdict.check(prefix + ".corner_angles", corners.passed);
    verdict.check(prefix + ".interior_angles", interior.passes(cfg.tolerances.interior_angle));
    verdict.check(prefix + ".lipschitz", lip.passed);
    verdict.check(prefix + ".density", density.passed);
    verdict.check(prefix + ".fibers", fibers.passed);
    verdict.check(prefix + ".boundary_agreement", agreement <= defaults::map_agreement);
    verdict.check(prefix + ".certificate", cert.certified);
    return 0;
  });
  if (keep) keep->emplace(std::move(built));
  return j;
}

struct Report {
  Json body;
  Verdict verdict;
  std::vector<Artifact> artifacts;
};

Json header(const ScenarioConfig& cfg, Subcommand sub) {
  Json j;
  j["schema_version"] = cfg.schema_version;
  j["subcommand"] = to_string(sub);
  j["config_hash"] = cfg.config_hash;
  j["seed"] = cfg.seed;
  j["kappa"] = cfg.kappa;
  j["target"] = cfg.target.describe();
  if (cfg.construction) j["construction"] = to_string(cfg.construction->kind);
  return j;
}

void run_cat_check(const ScenarioConfig& cfg, Report& rep) {
  const double tol = cfg.tolerances.defect.value_or(defaults::defect_tolerance_exact);
  const CertReport cert = stage("certify", [&] {
    return certify_cat(cfg.target, Kappa(cfg.kappa), cfg.budgets.triples, cfg.budgets.thinness_grid, tol, cfg.seed);
  });
  rep.body["certificate"] = to_json(cert);
  rep.verdict.check("certificate", cert.passed);
  if (cfg.outputs.svg) {
    rep.artifacts.push_back({"heatmap.svg", heatmap_svg(cert.cell_max_defect, cert.grid, cert.grid,
                                                        "max thinness defect per (s, t) cell")});
  }
  if (cfg.outputs.samples_csv) rep.artifacts.push_back({"samples.csv", samples_csv(cert)});
}

void run_verify(const ScenarioConfig& cfg, Subcommand sub, Report& rep) {
  const ConstructionConfig& c = need_construction(
      cfg, sub == Subcommand::verify_ruled ? ConstructionKind::ruled : ConstructionKind::harmonic, sub);
  const double tol = cfg.tolerances.defect.value_or(defaults::defect_tolerance_mesh);
  Json levels = Json::array();
  std::string table = "level,vertices,triples_evaluated,max_defect,max_abs_defect,mean_positive_defect,passed\n";
  std::vector<double> trend;
  std::vector<std::vector<double>> energies;
  std::vector<std::string> energy_names;
  for (int n : cfg.refinements) {
    const std::string prefix = "level" + std::to_string(n);
    LevelMap level = build_map(cfg, n, n);
    for (const auto& f : level.failed) rep.verdict.check(prefix + "." + f, false);
    Json lj;
    lj["level"] = n;
    lj["vertices"] = level.graph.vertex_count();
    lj["construction"] = level.construction;
    const QuotientMetric qm = stage("induced-metric", [&] { return induced_length_metric(level.graph); });
    lj["classes"] = qm.representative.size();
    lj["metric"] = metric_block(level.graph, cfg, rep.verdict, prefix + ".metric", &qm);
    InducedCertOptions opts;
    opts.triple_budget = cfg.budgets.triples;
    opts.grid = cfg.budgets.thinness_grid;
    opts.tolerance = tol;
    opts.seed = cfg.seed;
    opts.steiner_refinement = cfg.budgets.steiner_refinement;
    opts.mesh_level = n;
    const CertReport cert = stage("certify", [&] { return certify_induced(level.graph, Kappa(cfg.kappa), opts); });
    lj["certificate"] = to_json(cert);
    rep.verdict.check(prefix + ".certificate", cert.passed);
    trend.push_back(std::max(cert.max_defect, 0.0));
    table += std::to_string(n) + "," + std::to_string(level.graph.vertex_count()) + "," +
             std::to_string(cert.triples_evaluated) + "," + sci(cert.max_defect) + "," + sci(cert.max_abs_defect) +
             "," + sci(cert.mean_positive_defect) + "," + (cert.passed ? "true" : "false") + "\n";
    if (c.minimize) {
      const RelaxResult relaxed = stage("minimize", [&] {
        RelaxConfig rc;
        rc.tol_move = cfg.tolerances.tol_move;
        rc.max_iters = cfg.budgets.relax_max_iters;
        rc.mode = RelaxMode::dominated;
        return relax_graph(level.graph, rc);
      });
      const DominanceReport dom = stage("dominance", [&] { return dominates(level.graph, relaxed.graph); });
      Json mj;
      mj["relax"] = to_json(relaxed);
      mj["mode"] = to_string(RelaxMode::dominated);
      mj["dominance"] = to_json(dom);
      rep.verdict.check(prefix + ".minimizer.dominance", dom.holds);
      if (relaxed.converged) {
        const NonBubblingReport bub = non_bubbling_check(relaxed.graph);
        mj["non_bubbling"] = to_json(bub);
        rep.verdict.check(prefix + ".minimizer.non_bubbling", bub.passed);
        mj["metric"] = metric_block(relaxed.graph, cfg, rep.verdict, prefix + ".minimizer.metric");
      }
      lj["minimizer"] = std::move(mj);
    }
    if (c.polyhedral) lj["polyhedral"] = polyhedral_block(level.graph, cfg, rep.verdict, prefix + ".polyhedral");
    if (cfg.outputs.svg) {
      rep.artifacts.push_back({"heatmap_n" + std::to_string(n) + ".svg",
                               heatmap_svg(cert.cell_max_defect, cert.grid, cert.grid,
                                           "max thinness defect per (s, t) cell, grid " + std::to_string(n))});
    }
    if (cfg.outputs.samples_csv) rep.artifacts.push_back({"samples_n" + std::to_string(n) + ".csv", samples_csv(cert)});
    if (cfg.outputs.distance_tables) {
      rep.artifacts.push_back({"distances_n" + std::to_string(n) + ".csv", distance_table_csv(qm)});
    }
    if (!level.energy_trace.empty()) {
      energies.push_back(level.energy_trace);
      energy_names.push_back("grid " + std::to_string(n));
    }
    levels.push_back(std::move(lj));
  }
  bool monotone = true;
  for (std::size_t k = 1; k < trend.size(); ++k) {
    monotone = monotone && std::max(trend[k], defaults::defect_trend_floor) <=
                               std::max(trend[k - 1], defaults::defect_trend_floor);
  }
  rep.body["levels"] = std::move(levels);
  rep.body["defect_trend"] = {{"positive_max_defects", trend},
                              {"floor", defaults::defect_trend_floor},
                              {"non_increasing", monotone},
                              {"asserted", c.require_monotone_defects}};
  if (c.require_monotone_defects) rep.verdict.check("defect_trend", monotone);
  rep.artifacts.push_back({"defects.csv", table});
  if (cfg.outputs.svg && !energies.empty()) {
    rep.artifacts.push_back({"energy.svg", line_chart_svg(energies, energy_names, "discrete energy per sweep", true)});
  }
}

void run_minimize(const ScenarioConfig& cfg, Report& rep) {
  const ConstructionConfig& c = need_construction(cfg, std::nullopt, Subcommand::minimize_graph);
  LevelMap base = build_map(cfg, cfg.grid_a, cfg.grid_t);
  for (const auto& f : base.failed) rep.verdict.check(f, false);
  rep.body["construction_checks"] = base.construction;
  const MappedGraph start = stage("perturb", [&] { return perturbed(base.graph, c.perturb, cfg.seed); });
  RelaxConfig rc;
  rc.tol_move = cfg.tolerances.tol_move;
  rc.max_iters = cfg.budgets.relax_max_iters;
  const RelaxResult relaxed = stage("minimize", [&] { return relax_graph(start, rc); });
  rep.body["vertices"] = start.vertex_count();
  rep.body["perturb"] = c.perturb;
  rep.body["relax"] = to_json(relaxed);
  rep.verdict.check("relax.converged", relaxed.converged);
  const AngleReport angles = stage("angles", [&] { return vertex_angle_sums(relaxed.graph); });
  rep.body["angles"] = to_json(angles, true);
  if (relaxed.converged) rep.verdict.check("angles", angles.passes(cfg.tolerances.angle_sum));
  const ContainmentReport contain = containment_check(relaxed.graph);
  rep.body["containment"] = to_json(contain);
  rep.verdict.check("containment", contain.passed);
  const NonBubblingReport bub = non_bubbling_check(relaxed.graph);
  rep.body["non_bubbling"] = to_json(bub);
  if (relaxed.converged) rep.verdict.check("non_bubbling", bub.passed);
  rep.body["edge_geodesic_defect"] = edge_geodesic_defect(relaxed.graph, 8);
  rep.body["metric"] = metric_block(relaxed.graph, cfg, rep.verdict, "metric");

  rc.mode = RelaxMode::dominated;
  const RelaxResult dominated = stage("minimize", [&] { return relax_graph(start, rc); });
  const DominanceReport dom = stage("dominance", [&] { return dominates(start, dominated.graph); });
  rep.body["dominated_relax"] = to_json(dominated);
  rep.body["dominance"] = to_json(dom);
  rep.verdict.check("dominance", dom.holds);

  rep.artifacts.push_back({"relax_trace.csv", relax_trace_csv(relaxed)});
  if (cfg.outputs.svg) {
    std::vector<double> lengths;
    std::vector<double> moves;
    for (const auto& row : relaxed.trace) {
      lengths.push_back(row.total_length);
      moves.push_back(row.max_move);
    }
    rep.artifacts.push_back({"relax_trace.svg", line_chart_svg({lengths}, {"total length"}, "total length per sweep", false)});
    rep.artifacts.push_back({"relax_moves.svg", line_chart_svg({moves}, {"max move"}, "largest vertex move per sweep", true)});
  }
}

void run_build(const ScenarioConfig& cfg, Report& rep) {
  const ConstructionConfig& c = need_construction(cfg, std::nullopt, Subcommand::build_polyhedral);
  LevelMap base = build_map(cfg, cfg.grid_a, cfg.grid_t);
  for (const auto& f : base.failed) rep.verdict.check(f, false);
  rep.body["construction_checks"] = base.construction;
  MappedGraph mg = base.graph;
  if (c.relax) {
    RelaxConfig rc;
    rc.tol_move = cfg.tolerances.tol_move;
    rc.max_iters = cfg.budgets.relax_max_iters;
    RelaxResult relaxed = stage("minimize", [&] { return relax_graph(mg, rc); });
    rep.body["relax"] = to_json(relaxed);
    rep.verdict.check("relax.converged", relaxed.converged);
    mg = std::move(relaxed.graph);
  }
  std::optional<BuiltDisc> built;
  rep.body["polyhedral"] = polyhedral_block(mg, cfg, rep.verdict, "polyhedral", &built);
  rep.artifacts.push_back({"complex.json", text(to_json(built->complex))});
  if (cfg.outputs.svg) rep.artifacts.push_back({"net.svg", net_svg(built->complex)});
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg, Subcommand sub) {
  Report rep;
  rep.body = header(cfg, sub);
  RunResult result;
  try {
    switch (sub) {
      case Subcommand::cat_check: run_cat_check(cfg, rep); break;
      case Subcommand::verify_ruled:
      case Subcommand::verify_harmonic: run_verify(cfg, sub, rep); break;
      case Subcommand::minimize_graph: run_minimize(cfg, rep); break;
      case Subcommand::build_polyhedral: run_build(cfg, rep); break;
    }
  } catch (const StageFailure& f) {
    result.failed_stage = f.stage;
    result.error = f.what;
  }
  result.failed_checks = rep.verdict.failed();
  result.passed = result.failed_stage.empty() && rep.verdict.passed();
  rep.body["passed"] = result.passed;
  rep.body["failed_checks"] = result.failed_checks;
  if (!result.failed_stage.empty()) {
    rep.body["failed_stage"] = result.failed_stage;
    rep.body["error"] = result.error;
  }
  result.artifacts.push_back({"report.json", text(rep.body)});
  for (auto& a : rep.artifacts) result.artifacts.push_back(std::move(a));
  return result;
}

}  // namespace catdisc
