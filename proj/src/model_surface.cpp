#include "catdisc/model_surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "catdisc/defaults.hpp"
#include "catdisc/error.hpp"

namespace catdisc {

namespace {

constexpr double pi = std::numbers::pi;

double minkowski(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y - a.z * b.z; }

double clamp_zero(double side) { return side < defaults::zero_side ? 0.0 : side; }

// Generalized sine, up to a positive factor that cancels in the half-angle
// formulas: sin(sqrt(k) x), x, or sinh(sqrt(-k) x).
double gsin(Kappa kappa, double x) {
  switch (kappa.sign()) {
    case 1: return std::sin(x / kappa.radius());
    case -1: return std::sinh(x / kappa.radius());
    default: return x;
  }
}

void check_triangle(Kappa kappa, double a, double b, double c, bool strict_perimeter) {
  if (!(a >= 0.0 && b >= 0.0 && c >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "triangle sides must be nonnegative");
  }
  const double perimeter = a + b + c;
  const double slack = defaults::triangle_slack * perimeter;
  if (a > b + c + slack || b > a + c + slack || c > a + b + slack) {
    throw Error(ErrorCode::triangle_inequality,
                "sides (" + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c) + ")");
  }
  if (kappa.sign() > 0) {
    const double limit = 2.0 * kappa.diameter_bound();
    const bool too_large = strict_perimeter ? perimeter >= limit : perimeter > limit * (1.0 + defaults::triangle_slack);
    if (too_large) {
      throw Error(ErrorCode::too_large_triangle, "perimeter " + std::to_string(perimeter) + " >= 2 R_kappa");
    }
  }
}

}  // namespace

Kappa::Kappa(double kappa) : kappa_(std::abs(kappa) <= defaults::kappa_zero ? 0.0 : kappa) {
  if (!std::isfinite(kappa)) throw Error(ErrorCode::invalid_argument, "kappa must be finite");
  radius_ = kappa_ == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::sqrt(std::abs(kappa_));
}

double Kappa::diameter_bound() const {
  return kappa_ > 0.0 ? pi * radius_ : std::numeric_limits<double>::infinity();
}

const char* to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::none: return "none";
    case Degeneracy::flat: return "flat";
    case Degeneracy::collapsed: return "collapsed";
    case Degeneracy::point: return "point";
  }
  return "unknown";
}

void validate_point(Kappa kappa, const ModelPoint& p) {
  const Vec3& x = p.coords;
  if (!std::isfinite(x.x) || !std::isfinite(x.y) || !std::isfinite(x.z)) {
    throw Error(ErrorCode::invalid_point, "non-finite coordinates");
  }
  const double tol = defaults::quadric_tolerance;
  switch (kappa.sign()) {
    case 0:
      if (std::abs(x.z) > tol) throw Error(ErrorCode::invalid_point, "plane point with z != 0");
      return;
    case 1: {
      const double r2 = kappa.radius() * kappa.radius();
      if (std::abs(dot(x, x) - r2) > tol * std::max(1.0, r2)) {
        throw Error(ErrorCode::invalid_point, "point off the sphere");
      }
      return;
    }
    default: {
      const double r2 = kappa.radius() * kappa.radius();
      const double scale = std::max({1.0, r2, dot(x, x)});
      if (x.z <= 0.0 || std::abs(minkowski(x, x) + r2) > tol * scale) {
        throw Error(ErrorCode::invalid_point, "point off the hyperboloid sheet");
      }
    }
  }
}

ModelPoint project_to_model(Kappa kappa, const Vec3& c) {
  switch (kappa.sign()) {
    case 0: return ModelPoint{{c.x, c.y, 0.0}};
    case 1: {
      const double n = norm(c);
      if (n == 0.0) throw Error(ErrorCode::invalid_point, "cannot project the origin onto the sphere");
      return ModelPoint{c * (kappa.radius() / n)};
    }
    default: {
      const double r = kappa.radius();
      return ModelPoint{{c.x, c.y, std::sqrt(r * r + c.x * c.x + c.y * c.y)}};
    }
  }
}

ModelPoint model_base_point(Kappa kappa) {
  return kappa.sign() == 0 ? ModelPoint{{0.0, 0.0, 0.0}} : ModelPoint{{0.0, 0.0, kappa.radius()}};
}

ModelPoint model_polar(Kappa kappa, double dist, double direction) {
  const double c = std::cos(direction);
  const double s = std::sin(direction);
  switch (kappa.sign()) {
    case 0: return ModelPoint{{dist * c, dist * s, 0.0}};
    case 1: {
      const double r = kappa.radius();
      const double th = dist / r;
      return ModelPoint{{r * std::sin(th) * c, r * std::sin(th) * s, r * std::cos(th)}};
    }
    default: {
      const double r = kappa.radius();
      const double th = dist / r;
      return ModelPoint{{r * std::sinh(th) * c, r * std::sinh(th) * s, r * std::cosh(th)}};
    }
  }
}

double model_distance(Kappa kappa, const ModelPoint& p, const ModelPoint& q) {
  validate_point(kappa, p);
  validate_point(kappa, q);
  const Vec3& a = p.coords;
  const Vec3& b = q.coords;
  switch (kappa.sign()) {
    case 0: return std::hypot(a.x - b.x, a.y - b.y);
    case 1: return kappa.radius() * std::atan2(norm(cross(a, b)), dot(a, b));
    default: {
      const Vec3 d = a - b;
      const double chord = std::sqrt(std::max(0.0, minkowski(d, d)));
      const double r = kappa.radius();
      return 2.0 * r * std::asinh(chord / (2.0 * r));
    }
  }
}

double tangent_norm(Kappa kappa, const Vec3& v) {
  return kappa.sign() < 0 ? std::sqrt(std::max(0.0, minkowski(v, v))) : norm(v);
}

Vec3 model_log(Kappa kappa, const ModelPoint& p, const ModelPoint& q) {
  const double d = model_distance(kappa, p, q);
  const Vec3 w = q.coords - p.coords;
  if (kappa.sign() == 0) return w;
  if (d == 0.0) return {};
  const double r2 = kappa.radius() * kappa.radius();
  const Vec3 u = kappa.sign() > 0 ? w - p.coords * (dot(p.coords, w) / r2) : w + p.coords * (minkowski(p.coords, w) / r2);
  const double un = tangent_norm(kappa, u);
  if (un <= 1e-300 || (kappa.sign() > 0 && kappa.diameter_bound() - d < 1e-9 * kappa.radius())) {
    throw Error(ErrorCode::non_unique_geodesic, "antipodal points have no unique geodesic");
  }
  return u * (d / un);
}

ModelPoint model_exp(Kappa kappa, const ModelPoint& p, const Vec3& v) {
  const double s = tangent_norm(kappa, v);
  if (s == 0.0) return p;
  switch (kappa.sign()) {
    case 0: return ModelPoint{{p.coords.x + v.x, p.coords.y + v.y, 0.0}};
    case 1: {
      const double r = kappa.radius();
      const double th = s / r;
      return project_to_model(kappa, p.coords * std::cos(th) + v * (r * std::sin(th) / s));
    }
    default: {
      const double r = kappa.radius();
      const double th = s / r;
      return project_to_model(kappa, p.coords * std::cosh(th) + v * (r * std::sinh(th) / s));
    }
  }
}

ModelPoint geodesic_point(Kappa kappa, const ModelPoint& p, const ModelPoint& q, double t) {
  if (t == 0.0) {
    validate_point(kappa, p);
    return p;
  }
  if (t == 1.0) {
    validate_point(kappa, q);
    return q;
  }
  if (kappa.sign() == 0) {
    validate_point(kappa, p);
    validate_point(kappa, q);
    const Vec3 a = p.coords;
    const Vec3 b = q.coords;
    return ModelPoint{{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), 0.0}};
  }
  return model_exp(kappa, p, model_log(kappa, p, q) * t);
}

double angle_from_sides(Kappa kappa, double a, double b, double c) {
  a = clamp_zero(a);
  b = clamp_zero(b);
  c = clamp_zero(c);
  if (a == 0.0 || b == 0.0) throw Error(ErrorCode::undefined_angle, "angle at a zero-length side");
  check_triangle(kappa, a, b, c, /*strict_perimeter=*/false);
  const double sa = std::max(0.0, 0.5 * (b + c - a));
  const double sb = std::max(0.0, 0.5 * (a + c - b));
  const double sc = std::max(0.0, 0.5 * (a + b - c));
  double s = 0.5 * (a + b + c);
  if (kappa.sign() > 0) s = std::min(s, kappa.diameter_bound());
  const double num = std::max(0.0, gsin(kappa, sa) * gsin(kappa, sb));
  const double den = std::max(0.0, gsin(kappa, s) * gsin(kappa, sc));
  return 2.0 * std::atan2(std::sqrt(num), std::sqrt(den));
}

double side_from_angle(Kappa kappa, double a, double b, double gamma) {
  if (!(a >= 0.0 && b >= 0.0)) throw Error(ErrorCode::invalid_argument, "sides must be nonnegative");
  const double h = std::sin(0.5 * gamma);
  const double hav_gamma = h * h;
  switch (kappa.sign()) {
    case 0: return std::sqrt((a - b) * (a - b) + 4.0 * a * b * hav_gamma);
    case 1: {
      const double r = kappa.radius();
      const double A = a / r;
      const double B = b / r;
      const double hd = std::sin(0.5 * (A - B));
      const double hav = std::clamp(hd * hd + std::sin(A) * std::sin(B) * hav_gamma, 0.0, 1.0);
      return r * 2.0 * std::asin(std::sqrt(hav));
    }
    default: {
      const double r = kappa.radius();
      const double A = a / r;
      const double B = b / r;
      const double hd = std::sinh(0.5 * (A - B));
      const double sh2 = std::max(0.0, hd * hd + std::sinh(A) * std::sinh(B) * hav_gamma);
      return r * 2.0 * std::asinh(std::sqrt(sh2));
    }
  }
}

ComparisonTriangle build_comparison_triangle(Kappa kappa, double a, double b, double c) {
  a = clamp_zero(a);
  b = clamp_zero(b);
  c = clamp_zero(c);
  check_triangle(kappa, a, b, c, /*strict_perimeter=*/true);

  ComparisonTriangle tri;
  tri.sides = {a, b, c};
  const int zeros = (a == 0.0) + (b == 0.0) + (c == 0.0);
  const double perimeter = a + b + c;
  const double longest = std::max({a, b, c});
  if (zeros >= 2) {
    tri.degeneracy = Degeneracy::point;
    tri.sides = {0.0, 0.0, 0.0};
  } else if (zeros == 1) {
    tri.degeneracy = Degeneracy::collapsed;
  } else if (perimeter - 2.0 * longest <= defaults::zero_side * perimeter) {
    tri.degeneracy = Degeneracy::flat;
  }

  const ModelPoint base = model_base_point(kappa);
  switch (tri.degeneracy) {
    case Degeneracy::point:
      tri.vertices = {base, base, base};
      tri.angles = {0.0, 0.0, 0.0};
      return tri;
    case Degeneracy::collapsed: {
      const double half = 0.5 * pi;
      if (a == 0.0) {
        tri.angles = {half, half, 0.0};
        const ModelPoint far = model_polar(kappa, b, 0.0);
        tri.vertices = {base, base, far};
      } else if (b == 0.0) {
        tri.angles = {half, 0.0, half};
        const ModelPoint far = model_polar(kappa, a, 0.0);
        tri.vertices = {base, far, base};
      } else {
        tri.angles = {0.0, half, half};
        const ModelPoint far = model_polar(kappa, a, 0.0);
        tri.vertices = {base, far, far};
      }
      return tri;
    }
    case Degeneracy::flat: {
      // Collinear: the vertex opposite the longest side lies between the
      // other two.
      const int middle = longest == c ? 0 : (longest == a ? 2 : 1);
      tri.angles = {0.0, 0.0, 0.0};
      tri.angles[middle] = pi;
      tri.vertices = {base, model_polar(kappa, a, 0.0), model_polar(kappa, b, middle == 0 ? pi : 0.0)};
      return tri;
    }
    default: break;
  }

  tri.angles[0] = angle_from_sides(kappa, a, b, c);
  tri.angles[1] = angle_from_sides(kappa, a, c, b);
  tri.angles[2] = angle_from_sides(kappa, b, c, a);
  tri.vertices[0] = base;
  tri.vertices[1] = model_polar(kappa, a, 0.0);
  tri.vertices[2] = model_polar(kappa, b, tri.angles[0]);
  return tri;
}

}  // namespace catdisc
