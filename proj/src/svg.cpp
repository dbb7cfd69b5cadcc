#include "catdisc/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>

namespace catdisc {

namespace {

constexpr double canvas = 640.0;
constexpr double margin = 40.0;

std::string fmt(const char* pattern, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

std::string num(double x) { return fmt("%.2f", x); }

std::string header(double width, double height, const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n<title>" + title +
         "</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<text x=\"" + num(margin) +
         "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" + title + "</text>\n";
}

// Blue (low) through white to red (high), symmetric around zero when the
// range straddles it.
std::string color(double x, double lo, double hi) {
  if (!std::isfinite(x)) return "#bbbbbb";
  double f = 0.5;
  if (lo < 0.0 && hi > 0.0) {
    const double m = std::max(-lo, hi);
    f = 0.5 + 0.5 * x / m;
  } else if (hi > lo) {
    f = (x - lo) / (hi - lo);
  }
  f = std::clamp(f, 0.0, 1.0);
  int r = 255;
  int g = 255;
  int b = 255;
  if (f < 0.5) {
    const double k = f / 0.5;
    r = static_cast<int>(std::lround(59 + k * (255 - 59)));
    g = static_cast<int>(std::lround(76 + k * (255 - 76)));
    b = static_cast<int>(std::lround(192 + k * (255 - 192)));
  } else {
    const double k = (f - 0.5) / 0.5;
    g = static_cast<int>(std::lround(255 - k * (255 - 44)));
    b = static_cast<int>(std::lround(255 - k * (255 - 44)));
    r = static_cast<int>(std::lround(255 - k * (255 - 180)));
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string heatmap_svg(std::span<const double> values, int rows, int cols, const std::string& title) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double cell = (canvas - 2.0 * margin) / std::max(rows, cols);
  std::string out = header(canvas, canvas + 30.0, title);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double v = values[static_cast<std::size_t>(r) * cols + c];
      out += "<rect x=\"" + num(margin + c * cell) + "\" y=\"" + num(margin + r * cell) + "\" width=\"" + num(cell) +
             "\" height=\"" + num(cell) + "\" fill=\"" + color(v, lo, hi) + "\"/>\n";
    }
  }
  const double y = margin + rows * cell + 20.0;
  out += "<text x=\"" + num(margin) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"12\">rows: s, columns: t; min " +
         (std::isfinite(lo) ? fmt("%.3e", lo) : std::string("n/a")) + ", max " +
         (std::isfinite(hi) ? fmt("%.3e", hi) : std::string("n/a")) + "</text>\n</svg>\n";
  return out;
}

std::string line_chart_svg(const std::vector<std::vector<double>>& series, const std::vector<std::string>& names,
                           const std::string& title, bool log_scale) {
  auto tr = [log_scale](double v) { return log_scale ? std::log10(v) : v; };
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t longest = 1;
  for (const auto& s : series) {
    longest = std::max(longest, s.size());
    for (double v : s) {
      if (!std::isfinite(v) || (log_scale && v <= 0.0)) continue;
      lo = std::min(lo, tr(v));
      hi = std::max(hi, tr(v));
    }
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi <= lo) hi = lo + 1.0;
  const double w = canvas - 2.0 * margin;
  const std::array<const char*, 4> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::string out = header(canvas, canvas, title);
  out += "<rect x=\"" + num(margin) + "\" y=\"" + num(margin) + "\" width=\"" + num(w) + "\" height=\"" + num(w) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    std::string pts;
    for (std::size_t i = 0; i < series[k].size(); ++i) {
      const double v = series[k][i];
      if (!std::isfinite(v) || (log_scale && v <= 0.0)) continue;
      const double x = margin + w * (longest > 1 ? static_cast<double>(i) / (longest - 1) : 0.0);
      const double y = margin + w * (1.0 - (tr(v) - lo) / (hi - lo));
      pts += num(x) + "," + num(y) + " ";
    }
    out += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" + std::string(palette[k % palette.size()]) +
           "\" points=\"" + pts + "\"/>\n";
    const std::string label = k < names.size() ? names[k] : "series " + std::to_string(k);
    out += "<text x=\"" + num(margin + 8.0) + "\" y=\"" + num(margin + 16.0 * (k + 1)) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" + palette[k % palette.size()] + "\">" + label +
           "</text>\n";
  }
  const std::string axis = log_scale ? "log10 " : "";
  out += "<text x=\"" + num(margin) + "\" y=\"" + num(canvas - 12.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + axis + "range [" + fmt("%.3g", lo) + ", " +
         fmt("%.3g", hi) + "] over " + std::to_string(longest) + " samples</text>\n</svg>\n";
  return out;
}

std::string net_svg(const PolyComplex& w) {
  const DiscMesh& m = w.mesh();
  const int n = m.triangle_count();
  struct P {
    double x;
    double y;
  };
  std::vector<std::array<P, 3>> placed(n);
  std::vector<char> done(n, 0);
  auto side = [&](int t, int a, int b) {
    return w.edge_lengths()[m.edge_id(m.triangles()[t][a], m.triangles()[t][b])];
  };
  // Flat apex over base (p, q) at distances (dp, dq) on the side `sign`.
  auto apex = [](P p, P q, double dp, double dq, double sign) {
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;
    const double base = std::hypot(dx, dy);
    if (base <= 0.0) return P{p.x + dp, p.y};
    const double along = (dp * dp - dq * dq + base * base) / (2.0 * base);
    const double up = std::sqrt(std::max(0.0, dp * dp - along * along));
    return P{p.x + (along * dx - sign * up * dy) / base, p.y + (along * dy + sign * up * dx) / base};
  };
  auto orient = [](P a, P b, P c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); };
  for (int root = 0; root < n; ++root) {
    if (done[root]) continue;
    const double ab = side(root, 0, 1);
    placed[root] = {P{0.0, 0.0}, P{ab, 0.0}, apex(P{0.0, 0.0}, P{ab, 0.0}, side(root, 0, 2), side(root, 1, 2), 1.0)};
    done[root] = 1;
    std::queue<int> todo;
    todo.push(root);
    while (!todo.empty()) {
      const int t = todo.front();
      todo.pop();
      const Triangle& tri = m.triangles()[t];
      for (int s = 0; s < 3; ++s) {
        const int a = s;
        const int b = (s + 1) % 3;
        const int c = (s + 2) % 3;
        for (int u : m.edge_triangles(m.edge_id(tri[a], tri[b]))) {
          if (done[u]) continue;
          const Triangle& ut = m.triangles()[u];
          int ia = 0;
          int ib = 0;
          int ic = 0;
          for (int k = 0; k < 3; ++k) {
            if (ut[k] == tri[a]) ia = k;
            else if (ut[k] == tri[b]) ib = k;
            else ic = k;
          }
          const P pa = placed[t][a];
          const P pb = placed[t][b];
          const double away = orient(pa, pb, placed[t][c]) >= 0.0 ? -1.0 : 1.0;
          placed[u][ia] = pa;
          placed[u][ib] = pb;
          placed[u][ic] = apex(pa, pb, side(u, ia, ic), side(u, ib, ic), away);
          done[u] = 1;
          todo.push(u);
        }
      }
    }
  }
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = x0;
  double x1 = -x0;
  double y1 = -x0;
  for (const auto& tri : placed) {
    for (const P& p : tri) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
  }
  const double span = std::max({x1 - x0, y1 - y0, 1e-12});
  const double scale = (canvas - 2.0 * margin) / span;
  std::string out = header(canvas, canvas, "net of W (flat triangles with the glued side lengths)");
  for (int t = 0; t < n; ++t) {
    const Degeneracy d = w.triangles()[t].degeneracy;
    const char* fill = d == Degeneracy::none ? "#dde8f5" : "#f5dddd";
    std::string pts;
    for (const P& p : placed[t]) pts += num(margin + (p.x - x0) * scale) + "," + num(margin + (y1 - p.y) * scale) + " ";
    out += "<polygon points=\"" + pts + "\" fill=\"" + fill + "\" stroke=\"#335\" stroke-width=\"0.6\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace catdisc
