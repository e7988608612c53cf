#pragma once

#include <string>
#include <vector>

namespace pamcli {

struct HeatMap {
  int nx = 0, ny = 0;
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  std::string x_label, y_label, title;
  /// Category index per cell, row-major with y slowest.
  std::vector<int> cells;
  std::vector<std::string> legend;
  std::vector<std::string> colors;
};

std::string render_heat_map(const HeatMap& m);

}  // namespace pamcli
