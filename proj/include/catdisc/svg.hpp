#pragma once

#include <span>
#include <string>
#include <vector>

#include "catdisc/poly_complex.hpp"

namespace catdisc {

// rows x cols cell values, row 0 at the top. Non-finite cells are grey.
std::string heatmap_svg(std::span<const double> values, int rows, int cols, const std::string& title);

// One polyline per series against the sample index. With `log_scale`,
// values <= 0 are dropped.
std::string line_chart_svg(const std::vector<std::vector<double>>& series, const std::vector<std::string>& names,
                           const std::string& title, bool log_scale);

// Unfolding of the complex: triangles are laid out breadth-first across
// shared edges as flat triangles with the stored side lengths.
std::string net_svg(const PolyComplex& w);

}  // namespace catdisc
