#include "hsot/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace hsot {

namespace {

constexpr double kWidth = 720.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct AxisScale {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    double to_unit(double v) const {
        const double a = log ? std::log10(v) : v;
        const double l = log ? std::log10(lo) : lo;
        const double h = log ? std::log10(hi) : hi;
        return h > l ? (a - l) / (h - l) : 0.5;
    }
};

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

AxisScale fit_axis(const std::vector<PlotSeries>& series, bool log, bool use_x) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const PlotSeries& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double v = use_x ? s.x[i] : s.y[i];
            const double other = use_x ? s.y[i] : s.x[i];
            if (!usable(v, log) || !std::isfinite(other)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!(lo <= hi)) {
        lo = log ? 0.1 : 0.0;
        hi = 1.0;
    }
    if (lo == hi) {
        lo = log ? lo / 2.0 : lo - 0.5;
        hi = log ? hi * 2.0 : hi + 0.5;
    }
    if (!log) {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    return AxisScale{lo, hi, log};
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<PlotSeries>& series, bool log_x,
                              bool log_y) {
    const AxisScale xs = fit_axis(series, log_x, true);
    const AxisScale ys = fit_axis(series, log_y, false);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    const auto px = [&](double v) { return kLeft + plot_w * xs.to_unit(v); };
    const auto py = [&](double v) { return kTop + plot_h * (1.0 - ys.to_unit(v)); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth)
        << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << " "
        << num(kHeight) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // frame
    out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
        << num(plot_w) << "\" height=\"" << num(plot_h)
        << "\" fill=\"none\" stroke=\"#444\"/>\n";

    // ticks: 5 per axis, placed uniformly in scale space
    for (int k = 0; k <= 4; ++k) {
        const double u = k / 4.0;
        const double xv = xs.log ? std::pow(10.0, std::log10(xs.lo) +
                                                      u * (std::log10(xs.hi) - std::log10(xs.lo)))
                                 : xs.lo + u * (xs.hi - xs.lo);
        const double yv = ys.log ? std::pow(10.0, std::log10(ys.lo) +
                                                      u * (std::log10(ys.hi) - std::log10(ys.lo)))
                                 : ys.lo + u * (ys.hi - ys.lo);
        const double gx = kLeft + u * plot_w;
        const double gy = kTop + (1.0 - u) * plot_h;
        out << "<line x1=\"" << num(gx) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\""
            << num(gx) << "\" y2=\"" << num(kTop + plot_h + 5) << "\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << num(gx) << "\" y=\"" << num(kTop + plot_h + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << num(xv) << "</text>\n";
        out << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(gy) << "\" x2=\""
            << num(kLeft) << "\" y2=\"" << num(gy) << "\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(gy + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << num(yv) << "</text>\n";
    }
    out << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << num(kTop + plot_h / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 16 " << num(kTop + plot_h / 2) << ")\">" << y_label
        << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % 5];
        std::ostringstream pts;
        bool any = false;
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            const double xv = series[s].x[i], yv = series[s].y[i];
            if (!usable(xv, log_x) || !usable(yv, log_y)) continue;
            pts << num(px(xv)) << "," << num(py(yv)) << " ";
            any = true;
        }
        if (any) {
            out << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
        }
        // legend
        const double ly = kTop + 14.0 + 16.0 * static_cast<double>(s);
        out << "<line x1=\"" << num(kLeft + 10) << "\" y1=\"" << num(ly) << "\" x2=\""
            << num(kLeft + 32) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << num(kLeft + 38) << "\" y=\"" << num(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[s].label
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace hsot
