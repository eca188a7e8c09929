#include "eddikit/cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "eddikit/error.hpp"

namespace eddikit::cli::svg {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;
constexpr std::size_t kMaxPoints = 4000;
constexpr std::size_t kMaxCells = 250;

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string label(double v) { return fmt(v, "%.4g"); }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0, hi = 1.0;
  void widen() {
    if (!(hi > lo)) {
      const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.05;
      lo -= pad;
      hi += pad;
    }
  }
};

Range range_of(const std::vector<const std::vector<double>*>& sets) {
  Range r{INFINITY, -INFINITY};
  for (const auto* s : sets) {
    for (double v : *s) {
      if (!std::isfinite(v)) continue;
      r.lo = std::min(r.lo, v);
      r.hi = std::max(r.hi, v);
    }
  }
  if (!std::isfinite(r.lo)) r = {0.0, 1.0};
  r.widen();
  return r;
}

std::array<double, 5> linear_ticks(Range r) {
  std::array<double, 5> t{};
  for (int i = 0; i <= 4; ++i) t[i] = r.lo + (r.hi - r.lo) * i / 4.0;
  return t;
}

std::string frame(const std::string& title, const std::string& xl, const std::string& yl, Range xr,
                  const std::array<double, 5>& y_ticks) {
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth, "%.0f") + "\" height=\"" +
                  fmt(kHeight, "%.0f") + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) + "</text>\n";
  s += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = kLeft + pw * i / 4.0, fy = kTop + ph - ph * i / 4.0;
    s += "<text x=\"" + fmt(fx) + "\" y=\"" + fmt(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
         label(xr.lo + (xr.hi - xr.lo) * i / 4.0) + "</text>\n";
    s += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(fy + 4) + "\" text-anchor=\"end\">" +
         label(y_ticks[i]) + "</text>\n";
  }
  s += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(kHeight - 14) + "\" text-anchor=\"middle\">" + escape(xl) +
       "</text>\n";
  s += "<text x=\"16\" y=\"" + fmt(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       fmt(kTop + ph / 2) + ")\">" + escape(yl) + "</text>\n";
  return s;
}

}  // namespace

std::string render(const LinePlot& plot) {
  std::vector<const std::vector<double>*> xs, ys;
  for (const auto& s : plot.series) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
  }
  const Range xr = range_of(xs), yr = range_of(ys);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string s = frame(plot.title, plot.x_label, plot.y_label, xr, linear_ticks(yr));
  double legend_y = kTop + 16;
  for (const auto& series : plot.series) {
    const std::size_t n = std::min(series.x.size(), series.y.size());
    const std::size_t stride = std::max<std::size_t>(1, (n + kMaxPoints - 1) / kMaxPoints);
    if (series.markers) {
      s += "<g fill=\"" + series.color + "\">\n";
      for (std::size_t i = 0; i < n; i += stride) {
        if (!std::isfinite(series.x[i]) || !std::isfinite(series.y[i])) continue;
        s += "<circle cx=\"" + fmt(px(series.x[i])) + "\" cy=\"" + fmt(py(series.y[i])) + "\" r=\"1.2\"/>\n";
      }
      s += "</g>\n";
    } else {
      s += "<polyline fill=\"none\" stroke=\"" + series.color + "\" stroke-width=\"1.2\" points=\"";
      for (std::size_t i = 0; i < n; i += stride) {
        if (!std::isfinite(series.x[i]) || !std::isfinite(series.y[i])) continue;
        s += fmt(px(series.x[i])) + "," + fmt(py(series.y[i])) + " ";
      }
      s += "\"/>\n";
    }
    if (!series.label.empty()) {
      s += "<rect x=\"" + fmt(kWidth - kRight - 150) + "\" y=\"" + fmt(legend_y - 9) +
           "\" width=\"12\" height=\"10\" fill=\"" + series.color + "\"/>\n";
      s += "<text x=\"" + fmt(kWidth - kRight - 132) + "\" y=\"" + fmt(legend_y) + "\">" + escape(series.label) +
           "</text>\n";
      legend_y += 16;
    }
  }
  s += "</svg>\n";
  return s;
}

std::string render(const Heatmap& map) {
  const std::size_t nx = map.x.size(), ny = map.y.size();
  const Range xr = range_of({&map.x});
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  std::array<double, 5> y_ticks{};
  for (int i = 0; i <= 4; ++i) {
    y_ticks[i] = ny == 0 ? 0.0 : map.y[static_cast<std::size_t>(std::lround((ny - 1) * i / 4.0))];
  }
  std::string s = frame(map.title, map.x_label, map.y_label, xr, y_ticks);
  if (nx == 0 || ny == 0 || map.z.size() != nx * ny) return s + "</svg>\n";
  const std::size_t sx = std::max<std::size_t>(1, (nx + kMaxCells - 1) / kMaxCells);
  const std::size_t sy = std::max<std::size_t>(1, (ny + kMaxCells - 1) / kMaxCells);
  const std::size_t cx = (nx + sx - 1) / sx, cy = (ny + sy - 1) / sy;
  const double w = pw / static_cast<double>(cx), h = ph / static_cast<double>(cy);
  // Rows are evenly spaced by index, so a log-spaced grid reads as a log axis.
  s += "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t r = 0; r < cy; ++r) {
    for (std::size_t c = 0; c < cx; ++c) {
      const double z = std::clamp(map.z[(r * sy) * nx + c * sx], 0.0, 1.0);
      const int level = static_cast<int>(std::lround(255.0 * (1.0 - z)));
      char color[8];
      std::snprintf(color, sizeof color, "#%02x%02x%02x", level, level, level);
      s += "<rect x=\"" + fmt(kLeft + static_cast<double>(c) * w) + "\" y=\"" +
           fmt(kTop + ph - static_cast<double>(r + 1) * h) + "\" width=\"" + fmt(w + 0.05) + "\" height=\"" +
           fmt(h + 0.05) + "\" fill=\"" + color + "\"/>\n";
    }
  }
  s += "</g>\n</svg>\n";
  return s;
}

void write(const std::filesystem::path& path, const std::string& document) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << document;
  if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

}  // namespace eddikit::cli::svg
