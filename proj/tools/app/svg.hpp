#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace kickdyn::app {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;  // non-positive values are skipped
  std::vector<Series> series;
};

[[nodiscard]] std::string render_svg(const Plot& plot);
void write_svg(const std::filesystem::path& path, const Plot& plot);

}  // namespace kickdyn::app
