#include "catdisc/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <variant>

namespace catdisc {

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json to_json(const CertReport& rep, bool with_samples) {
  Json j;
  j["distance_source"] = rep.distance_source;
  j["kappa"] = rep.kappa;
  j["tolerance"] = rep.tolerance;
  j["seed"] = rep.seed;
  j["grid"] = rep.grid;
  j["triples_requested"] = rep.triples_requested;
  j["triples_evaluated"] = rep.triples_evaluated;
  j["skipped"] = {{"degenerate", rep.skipped_degenerate},
                  {"perimeter", rep.skipped_perimeter},
                  {"geodesic", rep.skipped_geodesic}};
  j["sample_count"] = rep.sample_count;
  j["max_defect"] = number(rep.max_defect);
  j["max_abs_defect"] = number(rep.max_abs_defect);
  j["mean_positive_defect"] = number(rep.mean_positive_defect);
  if (rep.mesh_level >= 0) j["mesh_level"] = rep.mesh_level;
  if (rep.steiner_refinement >= 0) {
    j["steiner_refinement"] = rep.steiner_refinement;
    j["paths"] = rep.paths;
    j["untaut_paths"] = rep.untaut_paths;
    j["regularization"] = rep.regularization;
    j["regularized_triangles"] = rep.regularized_triangles;
  }
  Json cells = Json::array();
  for (double c : rep.cell_max_defect) cells.push_back(number(c));
  j["cell_max_defect"] = std::move(cells);
  j["passed"] = rep.passed;
  if (with_samples) {
    Json rows = Json::array();
    for (const auto& s : rep.samples) {
      rows.push_back({s.triple, s.s_index, s.t_index, s.s, s.t, s.measured, s.compared, s.defect});
    }
    j["samples"] = std::move(rows);
  }
  return j;
}

Json to_json(const AngleReport& rep, bool per_vertex) {
  Json j;
  j["probe_scale"] = rep.probe_scale;
  j["comparison_kappa"] = rep.comparison_kappa;
  j["vertices"] = rep.vertices.size();
  j["min_sum"] = number(rep.min_sum);
  j["max_defect"] = number(rep.max_defect);
  j["undefined_vertices"] = rep.undefined_vertices;
  j["non_monotone_pairs"] = rep.non_monotone_pairs;
  if (per_vertex) {
    Json rows = Json::array();
    for (const auto& v : rep.vertices) {
      rows.push_back({{"vertex", v.vertex}, {"sum", v.sum}, {"sum_half", v.sum_half}, {"defect", v.defect},
                      {"undefined", v.undefined}});
    }
    j["per_vertex"] = std::move(rows);
  }
  return j;
}

Json to_json(const RelaxResult& res) {
  Json j;
  j["converged"] = res.converged;
  j["sweeps"] = res.sweeps;
  j["polish_accepted"] = res.polish_accepted;
  j["initial_length"] = res.trace.empty() ? 0.0 : res.trace.front().total_length;
  j["final_length"] = res.trace.empty() ? 0.0 : res.trace.back().total_length;
  return j;
}

Json to_json(const DominanceReport& rep) {
  return {{"holds", rep.holds}, {"strict", rep.strict}, {"max_shortfall", rep.max_shortfall},
          {"max_gain", rep.max_gain}};
}

Json to_json(const NonBubblingReport& rep) {
  return {{"repeated_points", rep.repeated_points},
          {"components_checked", rep.components_checked},
          {"components_missing_fixed", rep.components_missing_fixed},
          {"passed", rep.passed}};
}

Json to_json(const ContainmentReport& rep) {
  return {{"radius", rep.radius}, {"max_excess", rep.max_excess}, {"passed", rep.passed}};
}

Json to_json(const MetricComparison& rep) {
  return {{"pairs_checked", rep.pairs_checked},
          {"violations", rep.violations},
          {"strict_pairs", rep.strict_pairs},
          {"max_ratio", rep.max_ratio},
          {"mode", to_string(rep.mode)},
          {"approximation_factor", rep.approximation_factor},
          {"passed", rep.passed}};
}

Json to_json(const MonotoneQuotientReport& rep) {
  return {{"classes", rep.classes},
          {"nontrivial_classes", rep.nontrivial_classes},
          {"disconnected_classes", rep.disconnected_classes},
          {"passed", rep.passed}};
}

Json to_json(const SideCoherenceReport& rep) { return {{"max_error", rep.max_error}, {"passed", rep.passed}}; }

Json to_json(const CornerComparisonReport& rep) {
  return {{"probe_scale", rep.probe_scale},
          {"corners", rep.corners},
          {"worst_margin", number(rep.worst_margin)},
          {"worst_triangle", rep.worst_triangle},
          {"passed", rep.passed}};
}

Json to_json(const LipschitzReport& rep) {
  return {{"pairs", rep.pairs},
          {"max_ratio", number(rep.max_ratio)},
          {"slack", rep.slack},
          {"edges_checked", rep.edges_checked},
          {"max_edge_shortfall", rep.max_edge_shortfall},
          {"passed", rep.passed}};
}

Json to_json(const DensityReport& rep) {
  return {{"samples", rep.samples},
          {"epsilon", rep.epsilon},
          {"slack", rep.slack},
          {"max_distance", number(rep.max_distance)},
          {"passed", rep.passed}};
}

Json to_json(const FiberReport& rep) {
  return {{"classes", rep.classes}, {"disconnected", rep.disconnected}, {"passed", rep.passed}};
}

Json to_json(const LoopProbeReport& rep) {
  return {{"ran", rep.ran},
          {"loops", rep.loops},
          {"collapsed", rep.collapsed},
          {"stabilized", rep.stabilized},
          {"unresolved", rep.unresolved},
          {"shortest_stabilized", number(rep.shortest_stabilized)},
          {"length_bound", number(rep.length_bound)},
          {"found_short_geodesic", rep.found_short_geodesic}};
}

Json to_json(const PolyCertificate& cert) {
  return {{"interior_angles", to_json(cert.interior)},
          {"interior_angles_pass", cert.interior.passes(defaults::interior_angle_tolerance)},
          {"loop_probe", to_json(cert.loops)},
          {"certified", cert.certified},
          {"statement", cert.statement}};
}

Json to_json(const QuadrangleReport& rep) {
  return {{"rho", rep.rho},
          {"column_pairs", rep.column_pairs},
          {"empirical_l", number(rep.empirical_l)},
          {"finite", rep.finite},
          {"at_most_one", rep.at_most_one}};
}

Json to_json(const RuledMinimalityReport& rep) {
  return {{"max_length_excess", rep.max_length_excess},
          {"max_spacing_spread", rep.max_spacing_spread},
          {"geodesic_columns", rep.geodesic_columns},
          {"proportional", rep.proportional},
          {"passed", rep.passed}};
}

Json to_json(const PolyComplex& w) {
  const DiscMesh& m = w.mesh();
  Json j;
  j["chart_kappa"] = w.kappa().value();
  Json tris = Json::array();
  for (int t = 0; t < m.triangle_count(); ++t) {
    const auto& ct = w.triangles()[t];
    const Triangle& tri = m.triangles()[t];
    tris.push_back({{"vertices", {tri[0], tri[1], tri[2]}},
                    {"sides", {ct.sides[0], ct.sides[1], ct.sides[2]}},
                    {"angles", {ct.angles[0], ct.angles[1], ct.angles[2]}},
                    {"degeneracy", to_string(ct.degeneracy)}});
  }
  j["triangles"] = std::move(tris);
  Json edges = Json::array();
  for (int e = 0; e < m.edge_count(); ++e) {
    edges.push_back({{"ends", {m.edges()[e].first, m.edges()[e].second}},
                     {"length", w.edge_lengths()[e]},
                     {"triangles", m.edge_triangles(e)}});
  }
  j["edges"] = std::move(edges);
  j["vertex_class"] = w.vertex_class();
  j["gluing_defect"] = w.gluing_defect();
  return j;
}

Json to_json(const TargetPoint& p) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ModelPoint>) {
          return Json{x.coords.x, x.coords.y, x.coords.z};
        } else if constexpr (std::is_same_v<T, EuclideanPoint>) {
          return Json(x.x);
        } else if constexpr (std::is_same_v<T, TreePoint>) {
          return Json{{"edge", x.edge}, {"offset", x.offset}};
        } else {
          return Json{x.radius, x.angle};
        }
      },
      p);
}

std::string samples_csv(const CertReport& rep) {
  std::string out = "triple,s_index,t_index,s,t,measured,compared,defect\n";
  char buf[256];
  for (const auto& s : rep.samples) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.triple, s.s_index, s.t_index, s.s,
                  s.t, s.measured, s.compared, s.defect);
    out += buf;
  }
  return out;
}

}  // namespace catdisc
