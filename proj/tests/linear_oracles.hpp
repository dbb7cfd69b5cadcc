#pragma once

// Reference solvers built on Eigen, for the harmonic and total-length tests.

#include <array>
#include <cmath>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Harmonic map into R^d: solve the weighted graph Laplacian with Dirichlet
// data. `edges` are (u, v, w); `fixed[v]` marks boundary vertices whose
// coordinates are in `values`.
inline std::vector<std::vector<double>> dirichlet_solve(int n, const std::vector<std::tuple<int, int, double>>& edges,
                                                        const std::vector<char>& fixed,
                                                        const std::vector<std::vector<double>>& values) {
  std::vector<int> slot(n, -1);
  int free = 0;
  for (int v = 0; v < n; ++v) {
    if (!fixed[v]) slot[v] = free++;
  }
  const int dim = static_cast<int>(values.front().size());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(free, free);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(free, dim);
  for (const auto& [u, v, w] : edges) {
    for (auto [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
      if (fixed[a]) continue;
      lap(slot[a], slot[a]) += w;
      if (fixed[b]) {
        for (int k = 0; k < dim; ++k) rhs(slot[a], k) += w * values[b][k];
      } else {
        lap(slot[a], slot[b]) -= w;
      }
    }
  }
  const Eigen::MatrixXd sol = lap.ldlt().solve(rhs);
  std::vector<std::vector<double>> out = values;
  for (int v = 0; v < n; ++v) {
    if (fixed[v]) continue;
    for (int k = 0; k < dim; ++k) out[v][k] = sol(slot[v], k);
  }
  return out;
}

// Minimum of sum_e |x_u - x_v| over the free planar vertices. The kinks are
// smoothed to sqrt(|d|^2 + eps^2) and eps is driven to 1e-12 with damped
// Newton steps; the smoothed value overestimates by at most edges * eps.
inline double planar_total_length_minimum(int n, const std::vector<std::pair<int, int>>& edges,
                                          const std::vector<char>& fixed, std::vector<std::array<double, 2>> x) {
  std::vector<int> slot(n, -1);
  int free = 0;
  for (int v = 0; v < n; ++v) {
    if (!fixed[v]) slot[v] = free++;
  }
  auto value = [&](const std::vector<std::array<double, 2>>& y, double eps) {
    double s = 0.0;
    for (auto [u, v] : edges) s += std::sqrt(std::pow(y[u][0] - y[v][0], 2) + std::pow(y[u][1] - y[v][1], 2) + eps * eps);
    return s;
  };
  for (double eps = 1e-2; eps >= 1e-12; eps *= 0.1) {
    for (int it = 0; it < 200; ++it) {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * free);
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * free, 2 * free);
      for (auto [u, v] : edges) {
        const Eigen::Vector2d d(x[u][0] - x[v][0], x[u][1] - x[v][1]);
        const double len = std::sqrt(d.squaredNorm() + eps * eps);
        const Eigen::Vector2d grad = d / len;
        const Eigen::Matrix2d hess = (Eigen::Matrix2d::Identity() - grad * grad.transpose()) / len;
        const std::array<std::pair<int, double>, 2> ends{std::pair{u, 1.0}, std::pair{v, -1.0}};
        for (auto [a, sa] : ends) {
          if (fixed[a]) continue;
          g.segment<2>(2 * slot[a]) += sa * grad;
          for (auto [b, sb] : ends) {
            if (fixed[b]) continue;
            h.block<2, 2>(2 * slot[a], 2 * slot[b]) += sa * sb * hess;
          }
        }
      }
      if (g.norm() < 1e-14) break;
      const Eigen::VectorXd step = -h.ldlt().solve(g);
      const double before = value(x, eps);
      double lambda = 1.0;
      std::vector<std::array<double, 2>> trial = x;
      for (; lambda > 1e-12; lambda *= 0.5) {
        trial = x;
        for (int v = 0; v < n; ++v) {
          if (fixed[v]) continue;
          trial[v][0] += lambda * step(2 * slot[v]);
          trial[v][1] += lambda * step(2 * slot[v] + 1);
        }
        if (value(trial, eps) <= before) break;
      }
      if (lambda <= 1e-12) break;
      x = trial;
    }
  }
  return value(x, 0.0);
}

}  // namespace oracle
