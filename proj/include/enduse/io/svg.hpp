#pragma once

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "enduse/core/time_grid.hpp"

namespace enduse::io {

struct PlotLine {
  std::string label;
  std::vector<double> values;
  std::string color;
  bool dashed = false;
};

/// Line chart over one day: x axis in hours, one polyline per series.
inline std::string line_chart_svg(const std::string& title, const std::string& y_label, const TimeGrid& grid,
                                  const std::vector<PlotLine>& lines, const std::string& note = {}) {
  constexpr double W = 800, H = 400, left = 70, right = 160, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  double ymax = 0.0;
  for (const auto& l : lines)
    for (double v : l.values) ymax = std::max(ymax, v);
  if (ymax <= 0.0) ymax = 1.0;
  ymax *= 1.05;
  const double T = static_cast<double>(grid.steps_per_day);
  const auto x_of = [&](double step) { return left + pw * step / T; };
  const auto y_of = [&](double v) { return top + ph * (1.0 - v / ymax); };
  const auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << (note.empty() ? std::string() : "<desc>" + note + "</desc>\n")
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n"
      << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int hour = 0; hour <= 24; hour += 3) {
    const double x = left + pw * hour / 24.0;
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << top + ph << "\" x2=\"" << num(x) << "\" y2=\"" << top + ph + 5
        << "\" stroke=\"#444\"/><text x=\"" << num(x) << "\" y=\"" << top + ph + 20
        << "\" text-anchor=\"middle\">" << hour << "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double v = ymax * k / 4.0;
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << num(y_of(v)) << "\" x2=\"" << left << "\" y2=\""
        << num(y_of(v)) << "\" stroke=\"#444\"/><text x=\"" << left - 8 << "\" y=\"" << num(y_of(v) + 4)
        << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">hour of day</text>\n"
      << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << top + ph / 2 << ")\">" << y_label << "</text>\n";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& l = lines[i];
    svg << "<polyline fill=\"none\" stroke=\"" << l.color << "\" stroke-width=\"1.5\""
        << (l.dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
    for (std::size_t t = 0; t < l.values.size(); ++t)
      svg << (t ? " " : "") << num(x_of(static_cast<double>(t))) << ',' << num(y_of(l.values[t]));
    svg << "\"/>\n";
    const double ly = top + 15 + 18.0 * static_cast<double>(i);
    svg << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 30 << "\" y2=\"" << ly
        << "\" stroke=\"" << l.color << "\" stroke-width=\"2\"" << (l.dashed ? " stroke-dasharray=\"5,3\"" : "")
        << "/><text x=\"" << left + pw + 35 << "\" y=\"" << ly + 4 << "\">" << l.label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace enduse::io
