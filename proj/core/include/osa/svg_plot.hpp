#ifndef OSA_SVG_PLOT_HPP
#define OSA_SVG_PLOT_HPP

#include <string>
#include <vector>

namespace osa {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // NaN points are skipped
};

// Self-contained SVG line plot; no plotting runtime required. When
// log_x is set the x axis is log10 with decade ticks.
void write_svg_line_plot(const std::string& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<PlotSeries>& series, bool log_x);

}  // namespace osa

#endif  // OSA_SVG_PLOT_HPP
