#pragma once

#include <string>
#include <vector>

namespace hsot {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Static SVG line chart, deterministically formatted. Non-finite samples
// (and non-positive ones on logarithmic axes) are skipped.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<PlotSeries>& series, bool log_x,
                              bool log_y);

}  // namespace hsot
