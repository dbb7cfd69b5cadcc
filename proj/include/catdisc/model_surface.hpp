#pragma once

#include <array>
#include <limits>

#include "catdisc/vec.hpp"

// Trigonometry and geodesics on the model surface M_kappa of constant
// curvature kappa. All three curvature signs share one embedding in R^3:
//   kappa > 0: sphere |x| = 1/sqrt(kappa)
//   kappa = 0: plane z = 0
//   kappa < 0: upper sheet of x^2 + y^2 - z^2 = -1/|kappa| (Minkowski metric)
namespace catdisc {

class Kappa {
 public:
  explicit Kappa(double kappa);

  double value() const { return kappa_; }
  int sign() const { return kappa_ > 0.0 ? 1 : (kappa_ < 0.0 ? -1 : 0); }

  // R_kappa: pi/sqrt(kappa) for kappa > 0, +inf otherwise.
  double diameter_bound() const;

  // 1/sqrt(|kappa|); only meaningful when sign() != 0.
  double radius() const { return radius_; }

  friend bool operator==(const Kappa&, const Kappa&) = default;

 private:
  double kappa_;
  double radius_;
};

struct ModelPoint {
  Vec3 coords;

  friend bool operator==(const ModelPoint&, const ModelPoint&) = default;
};

inline ModelPoint planar_point(double x, double y) { return ModelPoint{{x, y, 0.0}}; }

// Throws Error(invalid_point) if p violates the quadric constraint.
void validate_point(Kappa kappa, const ModelPoint& p);

// Re-normalizes an approximate point onto the model quadric.
ModelPoint project_to_model(Kappa kappa, const Vec3& coords);

// The canonical base point: origin of the plane, north pole of the sphere,
// vertex of the hyperboloid.
ModelPoint model_base_point(Kappa kappa);

// Point at distance `dist` from the base point in direction `direction`
// (radians, measured in the xy-frame of the tangent plane at the base point).
ModelPoint model_polar(Kappa kappa, double dist, double direction);

double model_distance(Kappa kappa, const ModelPoint& p, const ModelPoint& q);

// Tangent vector at p pointing to q with length d(p, q). Minkowski-orthogonal
// to p on the hyperboloid.
Vec3 model_log(Kappa kappa, const ModelPoint& p, const ModelPoint& q);

ModelPoint model_exp(Kappa kappa, const ModelPoint& p, const Vec3& tangent);

// Norm of a tangent vector at any point (Minkowski norm for kappa < 0).
double tangent_norm(Kappa kappa, const Vec3& tangent);

// Point at fraction t of the unique geodesic from p to q. Throws
// Error(non_unique_geodesic) for antipodal points on the sphere.
ModelPoint geodesic_point(Kappa kappa, const ModelPoint& p, const ModelPoint& q, double t);

// Angle opposite side c in the model triangle with sides a, b, c.
double angle_from_sides(Kappa kappa, double a, double b, double c);

// Side opposite the angle gamma enclosed by sides a and b.
double side_from_angle(Kappa kappa, double a, double b, double gamma);

enum class Degeneracy {
  none,       // genuine triangle
  flat,       // collinear, no zero side
  collapsed,  // exactly one zero side: a segment with two identified sides
  point,      // all sides zero
};

const char* to_string(Degeneracy d);

// Sides are ordered (|v0 v1|, |v0 v2|, |v1 v2|); angles[i] is the corner
// angle at vertices[i].
struct ComparisonTriangle {
  std::array<double, 3> sides{};
  std::array<double, 3> angles{};
  std::array<ModelPoint, 3> vertices{};
  Degeneracy degeneracy = Degeneracy::none;
};

ComparisonTriangle build_comparison_triangle(Kappa kappa, double a, double b, double c);

}  // namespace catdisc
