#pragma once

#include <cstdint>

// Every numeric default used by the library and the CLI lives here.
namespace catdisc::defaults {

// Model-surface kernel.
inline constexpr double kappa_zero = 1e-14;        // |kappa| below this is exactly 0
inline constexpr double zero_side = 1e-12;         // side lengths below this are exactly 0
inline constexpr double quadric_tolerance = 1e-12;  // model point constraint, scale-relative
inline constexpr double triangle_slack = 1e-9;     // triangle-inequality slack, relative to perimeter

// Induced metrics.
inline constexpr double zero_class = 1e-12;  // vertices closer than this share a class
inline constexpr int connecting_exact_max_vertices = 20;
inline constexpr int metric_pair_budget = 400;

// Target-space numerics.
inline constexpr int barycenter_max_iters = 100;
inline constexpr double barycenter_tolerance = 1e-15;

// Graph relaxation.
inline constexpr double tol_move = 1e-10;
inline constexpr int max_iters = 10000;
inline constexpr double probe_scale_factor = 1e-3;  // times mean edge length
inline constexpr double angle_sum_tolerance = 1e-4;
inline constexpr double image_coincidence = 1e-9;   // non-bubbling: same image point

// Polyhedral comparison complex build.
inline constexpr double interior_angle_tolerance = 1e-6;
inline constexpr double side_coherence = 1e-9;
inline constexpr double angle_comparison_slack = 1e-4;
inline constexpr int q_grid = 10;
inline constexpr int steiner_refinement = 2;
inline constexpr double lipschitz_slack = 1e-3;
inline constexpr int lipschitz_pairs = 1000;
inline constexpr int density_samples = 2000;
inline constexpr int loop_probe_count = 1000;
inline constexpr int loop_probe_iters = 60;
inline constexpr double map_agreement = 1e-9;  // q(p(v)) against f(v)

// Certification.
inline constexpr double defect_tolerance_exact = 1e-6;
inline constexpr double defect_tolerance_mesh = 5e-3;
inline constexpr int triple_budget = 200;
inline constexpr int thinness_grid = 16;
inline constexpr std::uint64_t seed = 20240601;
inline constexpr double degenerate_regularization = 1e-8;  // times mean edge length
inline constexpr double defect_trend_floor = 1e-12;  // defects below this count as equal

// Constructions.
inline constexpr double harmonic_tolerance = 1e-12;
inline constexpr int harmonic_max_sweeps = 20000;
inline constexpr double rho_factor = 10.0;  // quadrangle check: times max boundary spacing
inline constexpr double ruled_exactness = 1e-8;

// Scenario files.
inline constexpr int schema_version = 1;
inline constexpr const char* output_dir = "out";
inline constexpr const char* output_dir_env = "CATDISC_OUT";

}  // namespace catdisc::defaults
