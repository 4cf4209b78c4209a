#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace bdi::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool bars = false;    // vertical bars of width bar_width centered on x
  double bar_width = 0.8;
  bool dashed = false;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  int width = 900;
  int height = 520;
};

// Static SVG. On a log axis non-positive values break the line.
std::string render_svg(const ChartSpec& chart, const std::vector<Series>& series);
void write_svg(const std::filesystem::path& path, const ChartSpec& chart,
               const std::vector<Series>& series);

// Colors for successive series.
const std::string& palette(std::size_t i);

}  // namespace bdi::cli
