#ifndef VOWELKIT_SVG_PLOT_HPP
#define VOWELKIT_SVG_PLOT_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace vowelkit {

struct ScatterPoint {
  double x;
  double y;
  std::string label;
};

struct ScatterPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ScatterPoint> points;
};

/// Distinct labels in sorted order; one legend entry (marker shape + colour) each.
std::vector<std::string> legend_labels(const ScatterPlot& plot);

/// Standalone SVG document.
std::string render_svg(const ScatterPlot& plot);

void write_svg(const ScatterPlot& plot, const std::filesystem::path& path);

}  // namespace vowelkit

#endif  // VOWELKIT_SVG_PLOT_HPP
