#pragma once

#include <filesystem>
#include <string>
#include <vector>

// Minimal SVG output for the CSV artifacts: line/scatter plots and a
// grayscale heatmap. Nothing reads these back.
namespace eddikit::cli::svg {

struct Series {
  std::string label;
  std::vector<double> x, y;
  std::string color = "#1f4e79";
  bool markers = false;  // dots instead of a polyline
};

struct LinePlot {
  std::string title, x_label, y_label;
  std::vector<Series> series;
};

struct Heatmap {
  std::string title, x_label, y_label;
  std::vector<double> x;  // columns
  std::vector<double> y;  // rows, drawn bottom to top
  std::vector<double> z;  // y.size() x x.size(), row-major, expected in [0, 1]
};

std::string render(const LinePlot& plot);
std::string render(const Heatmap& map);
void write(const std::filesystem::path& path, const std::string& document);

}  // namespace eddikit::cli::svg
