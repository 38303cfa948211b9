#include "osa/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace osa {
namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const char* kSeriesColors[] = {"#1f6fb2", "#c23b22", "#2e8540", "#8a5fbe",
                               "#b8860b", "#417177"};

double nice_step(double span, int target_ticks) {
  if (span <= 0.0) return 1.0;
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step;
  if (frac <= 1.0) step = 1.0;
  else if (frac <= 2.0) step = 2.0;
  else if (frac <= 5.0) step = 5.0;
  else step = 10.0;
  return step * mag;
}

}  // namespace

void write_svg_line_plot(const std::string& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<PlotSeries>& series, bool log_x) {
  const double width = 720, height = 480;
  const double ml = 78, mr = 24, mt = 44, mb = 58;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool any = false;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isnan(s.y[i]) || std::isnan(s.x[i])) continue;
      const double xv = log_x ? std::log10(std::max(s.x[i], 1e-300)) : s.x[i];
      if (!any) {
        x_min = x_max = xv;
        y_min = y_max = s.y[i];
        any = true;
      } else {
        x_min = std::min(x_min, xv);
        x_max = std::max(x_max, xv);
        y_min = std::min(y_min, s.y[i]);
        y_max = std::max(y_max, s.y[i]);
      }
    }
  }
  if (!any) {
    x_min = 0;
    x_max = 1;
  }
  y_min = std::min(y_min, 0.0);  // keep the zero baseline visible
  if (y_max <= y_min) y_max = y_min + 1.0;
  if (x_max <= x_min) x_max = x_min + 1.0;

  const auto px = [&](double xv) {
    return ml + (xv - x_min) / (x_max - x_min) * pw;
  };
  const auto py = [&](double yv) {
    return mt + ph - (yv - y_min) / (y_max - y_min) * ph;
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("svg: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";

  // x ticks
  if (log_x) {
    const int lo = static_cast<int>(std::ceil(x_min - 1e-9));
    const int hi = static_cast<int>(std::floor(x_max + 1e-9));
    for (int e = lo; e <= hi; ++e) {
      const double x = px(e);
      out << "<line x1=\"" << num(x) << "\" y1=\"" << mt + ph << "\" x2=\""
          << num(x) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
      out << "<text x=\"" << num(x) << "\" y=\"" << mt + ph + 20
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"12\">1e" << e << "</text>\n";
    }
  } else {
    const double step = nice_step(x_max - x_min, 6);
    for (double v = std::ceil(x_min / step) * step; v <= x_max + 1e-9; v += step) {
      const double x = px(v);
      out << "<line x1=\"" << num(x) << "\" y1=\"" << mt + ph << "\" x2=\""
          << num(x) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
      out << "<text x=\"" << num(x) << "\" y=\"" << mt + ph + 20
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"12\">" << num(v) << "</text>\n";
    }
  }
  // y ticks
  {
    const double step = nice_step(y_max - y_min, 5);
    for (double v = std::ceil(y_min / step) * step; v <= y_max + 1e-9; v += step) {
      const double y = py(v);
      out << "<line x1=\"" << ml - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << ml
          << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>\n";
      out << "<line x1=\"" << ml << "\" y1=\"" << num(y) << "\" x2=\"" << ml + pw
          << "\" y2=\"" << num(y)
          << "\" stroke=\"#dddddd\" stroke-width=\"0.7\"/>\n";
      out << "<text x=\"" << ml - 9 << "\" y=\"" << num(y + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"12\">" << num(v) << "</text>\n";
    }
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">" << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << y_label
      << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kSeriesColors[s % 6];
    std::string points;
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if (std::isnan(series[s].y[i]) || std::isnan(series[s].x[i])) continue;
      const double xv =
          log_x ? std::log10(std::max(series[s].x[i], 1e-300)) : series[s].x[i];
      points += num(px(xv)) + "," + num(py(series[s].y[i])) + " ";
    }
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.6\" points=\"" << points << "\"/>\n";
    if (!series[s].label.empty()) {
      const double ly = mt + 16 + 18 * static_cast<double>(s);
      out << "<line x1=\"" << ml + pw - 130 << "\" y1=\"" << num(ly - 4)
          << "\" x2=\"" << ml + pw - 104 << "\" y2=\"" << num(ly - 4)
          << "\" stroke=\"" << color << "\" stroke-width=\"1.6\"/>\n";
      out << "<text x=\"" << ml + pw - 98 << "\" y=\"" << num(ly)
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[s].label
          << "</text>\n";
    }
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("svg: write failed for " + path);
}

}  // namespace osa
