#pragma once

#include <string>

#include <json.hpp>

#include "catdisc/cat_verifier.hpp"
#include "catdisc/constructions.hpp"
#include "catdisc/graph_minimizer.hpp"
#include "catdisc/induced_metric.hpp"
#include "catdisc/polyhedral_builder.hpp"

// Report serialization. Keys keep insertion order; doubles are written with
// the shortest round-trip representation, so equal values give equal text.
namespace catdisc {

using Json = nlohmann::ordered_json;

// Per-sample rows are included only when `with_samples` is set.
Json to_json(const CertReport& rep, bool with_samples = false);
Json to_json(const AngleReport& rep, bool per_vertex = false);
Json to_json(const RelaxResult& res);
Json to_json(const DominanceReport& rep);
Json to_json(const NonBubblingReport& rep);
Json to_json(const ContainmentReport& rep);
Json to_json(const MetricComparison& rep);
Json to_json(const MonotoneQuotientReport& rep);
Json to_json(const SideCoherenceReport& rep);
Json to_json(const CornerComparisonReport& rep);
Json to_json(const LipschitzReport& rep);
Json to_json(const DensityReport& rep);
Json to_json(const FiberReport& rep);
Json to_json(const LoopProbeReport& rep);
Json to_json(const PolyCertificate& cert);
Json to_json(const QuadrangleReport& rep);
Json to_json(const RuledMinimalityReport& rep);

// Triangles with sides, angles and degeneracy; edges with lengths and the
// triangles glued along them; the vertex identification classes.
Json to_json(const PolyComplex& w);

Json to_json(const TargetPoint& p);

// "triple,s_index,t_index,s,t,measured,compared,defect" rows.
std::string samples_csv(const CertReport& rep);

// Finite values only; non-finite ones become null.
Json number(double x);

}  // namespace catdisc
