#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "genmetric/errors.hpp"

namespace genmetric {

struct PlotPoint {
  double x;
  double y;
};

struct PlotLabels {
  std::string title = "LFID";
  std::string x_label = "epoch";
  std::string y_label = "LFID";
};

namespace detail {

inline std::string fmt_g(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::pair<double, double> padded_range(double lo, double hi) {
  if (hi > lo) return {lo, hi};
  const double pad = lo == 0.0 ? 1.0 : 0.5 * std::abs(lo);
  return {lo - pad, hi + pad};
}

}  // namespace detail

/// CSV twin path: same stem, .csv extension.
inline std::filesystem::path plot_csv_path(const std::filesystem::path& svg_path) {
  auto p = svg_path;
  p.replace_extension(".csv");
  return p;
}

inline std::string render_svg(const std::vector<PlotPoint>& series, const PlotLabels& labels = {}) {
  if (series.empty()) throw ValidationError("plot needs at least one point");
  constexpr double kW = 640, kH = 400, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  auto [xmin, xmax] = std::minmax_element(series.begin(), series.end(),
                                          [](const PlotPoint& a, const PlotPoint& b) { return a.x < b.x; });
  auto [ymin, ymax] = std::minmax_element(series.begin(), series.end(),
                                          [](const PlotPoint& a, const PlotPoint& b) { return a.y < b.y; });
  const auto [x0, x1] = detail::padded_range(xmin->x, xmax->x);
  const auto [y0, y1] = detail::padded_range(ymin->y, ymax->y);
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * (kW - kLeft - kRight); };
  auto sy = [&](double y) { return kH - kBottom - (y - y0) / (y1 - y0) * (kH - kTop - kBottom); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << detail::xml_escape(labels.title) << "</text>\n";
  // axes
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight << "\" y2=\""
      << kH - kBottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kH - kBottom
      << "\" stroke=\"black\"/>\n";
  constexpr int kTicks = 5;
  for (int i = 0; i < kTicks; ++i) {
    const double fx = x0 + (x1 - x0) * i / (kTicks - 1);
    const double fy = y0 + (y1 - y0) * i / (kTicks - 1);
    svg << "<text x=\"" << sx(fx) << "\" y=\"" << kH - kBottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << detail::fmt_g(fx, 4)
        << "</text>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy(fy) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << detail::fmt_g(fy, 4)
        << "</text>\n";
  }
  svg << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << detail::xml_escape(labels.x_label) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << kH / 2 << "\" transform=\"rotate(-90 16 " << kH / 2
      << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << detail::xml_escape(labels.y_label) << "</text>\n";

  if (series.size() > 1) {
    svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (const auto& p : series) svg << detail::fmt_g(sx(p.x), 6) << ',' << detail::fmt_g(sy(p.y), 6) << ' ';
    svg << "\"/>\n";
  }
  for (const auto& p : series) {
    svg << "<circle cx=\"" << detail::fmt_g(sx(p.x), 6) << "\" cy=\"" << detail::fmt_g(sy(p.y), 6)
        << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

inline std::string render_csv(const std::vector<PlotPoint>& series) {
  std::string out = "x,y\n";
  for (const auto& p : series) out += detail::fmt_g(p.x, 17) + "," + detail::fmt_g(p.y, 17) + "\n";
  return out;
}

/// Writes an SVG line chart to `path` and the raw series as CSV next to it.
inline void emit_plot(const std::vector<PlotPoint>& series, const std::filesystem::path& path,
                      const PlotLabels& labels = {}) {
  const auto svg = render_svg(series, labels);
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::trunc);
    if (!out) throw IoError("cannot write " + p.string());
    out << text;
    if (!out) throw IoError("write failed for " + p.string());
  };
  write(path, svg);
  write(plot_csv_path(path), render_csv(series));
}

}  // namespace genmetric
