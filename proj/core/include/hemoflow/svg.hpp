#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hemoflow {

struct PlotSeries {
  std::vector<double> x, y;
  std::string label;
  std::string color = "#1f6fb4";
  double width = 1.5;
};

struct PlotSpec {
  std::string title, xlabel, ylabel;
  std::vector<PlotSeries> series;
  std::vector<std::string> annotations; ///< free-text lines under the title
  bool log_x = false;
  bool log_y = false;
  int width = 640, height = 420;
  /// Optional horizontal reference lines (value, label).
  std::vector<std::pair<double, std::string>> hlines;
};

/// Writes a line plot as a standalone SVG file.
void write_line_plot(const std::filesystem::path &path, const PlotSpec &spec);

struct HeatmapSpec {
  std::string title, xlabel, ylabel;
  std::vector<double> x, y;   ///< axis sample positions
  std::vector<double> values; ///< row-major [y][x]
  int width = 640, height = 420;
};

/// Writes a rectangular heat map (column = x, row = y) as SVG.
void write_heatmap(const std::filesystem::path &path, const HeatmapSpec &spec);

/// Multi-panel helper: writes several plots side by side in one SVG.
void write_panel_row(const std::filesystem::path &path,
                     const std::vector<PlotSpec> &panels);

} // namespace hemoflow
