#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's geometry; inputs and outputs are plain numbers.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Flat cone of total angle theta, points in polar coordinates.
struct Polar {
  double r;
  double a;
};

inline double cone_gap(double theta, double a, double b) {
  double g = std::fmod(std::abs(a - b), theta);
  return std::min(g, theta - g);
}

inline double cone_distance(double theta, Polar p, Polar q) {
  const double g = cone_gap(theta, p.a, q.a);
  if (g >= pi) return p.r + q.r;
  return std::sqrt(std::max(0.0, p.r * p.r + q.r * q.r - 2.0 * p.r * q.r * std::cos(g)));
}

// Unfold q next to p in the plane, walk the chord, fold back.
inline Polar cone_geodesic(double theta, Polar p, Polar q, double t) {
  const double g = cone_gap(theta, p.a, q.a);
  const double d = cone_distance(theta, p, q);
  if (g >= pi) {
    const double s = t * d;
    if (s <= p.r) return {p.r - s, p.a};
    return {s - p.r, q.a};
  }
  // Direction from p.a toward q.a that realizes the gap.
  double fwd = std::fmod(q.a - p.a, theta);
  if (fwd < 0.0) fwd += theta;
  const double sign = std::abs(fwd - g) < 1e-12 ? 1.0 : -1.0;
  const double x = (1.0 - t) * p.r + t * q.r * std::cos(g);
  const double y = t * q.r * std::sin(g);
  const double r = std::hypot(x, y);
  double a = p.a + sign * std::atan2(y, x);
  a = std::fmod(a, theta);
  if (a < 0.0) a += theta;
  return {r, a};
}

// Euclidean comparison distance between the points at fractions s of pq and
// t of pr in the planar triangle with sides |pq| = a, |pr| = b, |qr| = c.
inline double planar_comparison(double a, double b, double c, double s, double t) {
  const double cos_p = std::clamp((a * a + b * b - c * c) / (2.0 * a * b), -1.0, 1.0);
  const double x = s * a;
  const double y = t * b;
  return std::sqrt(std::max(0.0, x * x + y * y - 2.0 * x * y * cos_p));
}

// Max over a grid x grid of (cone distance - comparison distance) for one
// cone triple.
inline double cone_triple_defect(double theta, Polar p, Polar q, Polar r, int grid) {
  const double a = cone_distance(theta, p, q);
  const double b = cone_distance(theta, p, r);
  const double c = cone_distance(theta, q, r);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double s = static_cast<double>(i) / (grid - 1);
      const double t = static_cast<double>(j) / (grid - 1);
      const double measured = cone_distance(theta, cone_geodesic(theta, p, q, s), cone_geodesic(theta, p, r, t));
      worst = std::max(worst, measured - planar_comparison(a, b, c, s, t));
    }
  }
  return worst;
}

// Point on a tripod with unit legs: leg in {1, 2, 3}, offset from the center.
struct TripodPoint {
  int leg;
  double offset;
};

inline double tripod_distance(TripodPoint p, TripodPoint q) {
  if (p.leg == q.leg) return std::abs(p.offset - q.offset);
  return p.offset + q.offset;
}

// Exhaustive minimization of sum w_i d(x, p_i)^2 over the tripod: a coarse
// scan of all legs, then successively finer scans around the best point.
inline TripodPoint tripod_brute_force(const std::vector<TripodPoint>& anchors, const std::vector<double>& weights) {
  auto energy = [&](TripodPoint x) {
    double e = 0.0;
    for (std::size_t i = 0; i < anchors.size(); ++i) e += weights[i] * std::pow(tripod_distance(x, anchors[i]), 2);
    return e;
  };
  TripodPoint best{1, 0.0};
  double best_e = energy(best);
  for (int leg = 1; leg <= 3; ++leg) {
    for (int k = 0; k <= 10000; ++k) {
      const TripodPoint x{leg, k * 1e-4};
      if (const double e = energy(x); e < best_e) {
        best_e = e;
        best = x;
      }
    }
  }
  for (double step = 1e-6; step >= 1e-10; step *= 0.01) {
    const TripodPoint center = best;
    for (int leg = 1; leg <= 3; ++leg) {
      if (leg != center.leg && center.offset > 300 * step) continue;
      const double lo = leg == center.leg ? std::max(0.0, center.offset - 200 * step) : 0.0;
      for (int k = 0; k <= 400; ++k) {
        const TripodPoint x{leg, std::min(1.0, lo + k * step)};
        if (const double e = energy(x); e < best_e) {
          best_e = e;
          best = x;
        }
      }
    }
  }
  return best;
}

}  // namespace oracle
