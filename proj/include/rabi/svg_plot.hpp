#pragma once

// Small native SVG line-plot writer (no external renderer): stacked panels,
// shared styling, optional dotted horizontal guide lines.  Coordinates are
// derived only from the data values passed in, with fixed-precision
// formatting, so equal inputs give byte-identical files.

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace rabi {

struct SvgSeries {
    std::string label;
    std::string color = "#000000";
    std::string dash;  // stroke-dasharray, empty = solid
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgPanel {
    std::string x_label;
    std::string y_label;
    std::vector<SvgSeries> series;
    std::vector<double> hlines;  // dotted guides, included in the y range
};

namespace detail {

inline std::string fmt_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct AxisRange {
    double lo = 0.0, hi = 1.0;
    double map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

inline AxisRange fit_range(double lo, double hi) {
    if (!(hi - lo > 1e-12)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.04 * (hi - lo);
    return {lo - pad, hi + pad};
}

}  // namespace detail

inline void write_svg_plot(std::ostream& os, const std::string& title, const std::vector<SvgPanel>& panels,
                           int width = 860, int panel_height = 250) {
    const int ml = 72, mr = 24, mt = 34, mb = 46;
    const int total_h = mt + panel_height * static_cast<int>(panels.size()) + 8;

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << total_h
       << "\" viewBox=\"0 0 " << width << " " << total_h << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"15\">"
       << title << "</text>\n";

    for (std::size_t p = 0; p < panels.size(); ++p) {
        const SvgPanel& panel = panels[p];
        const double top = mt + static_cast<double>(p) * panel_height + 10;
        const double bottom = mt + static_cast<double>(p + 1) * panel_height - mb;
        const double left = ml, right = width - mr;

        double xlo = 0.0, xhi = 1.0, ylo = 0.0, yhi = 1.0;
        bool first = true;
        for (const auto& s : panel.series) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (first) {
                    xlo = xhi = s.x[i];
                    ylo = yhi = s.y[i];
                    first = false;
                }
                xlo = std::min(xlo, s.x[i]);
                xhi = std::max(xhi, s.x[i]);
                ylo = std::min(ylo, s.y[i]);
                yhi = std::max(yhi, s.y[i]);
            }
        }
        for (double h : panel.hlines) {
            ylo = std::min(ylo, h);
            yhi = std::max(yhi, h);
        }
        const detail::AxisRange xr = detail::fit_range(xlo, xhi);
        const detail::AxisRange yr = detail::fit_range(ylo, yhi);

        os << "<rect x=\"" << detail::fmt_coord(left) << "\" y=\"" << detail::fmt_coord(top) << "\" width=\""
           << detail::fmt_coord(right - left) << "\" height=\"" << detail::fmt_coord(bottom - top)
           << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

        for (int t = 0; t <= 4; ++t) {
            const double fx = xr.lo + (xr.hi - xr.lo) * t / 4.0;
            const double px = xr.map(fx, left, right);
            os << "<line x1=\"" << detail::fmt_coord(px) << "\" y1=\"" << detail::fmt_coord(bottom)
               << "\" x2=\"" << detail::fmt_coord(px) << "\" y2=\"" << detail::fmt_coord(bottom + 5)
               << "\" stroke=\"#444\"/>\n";
            os << "<text x=\"" << detail::fmt_coord(px) << "\" y=\"" << detail::fmt_coord(bottom + 18)
               << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
               << detail::fmt_tick(fx) << "</text>\n";

            const double fy = yr.lo + (yr.hi - yr.lo) * t / 4.0;
            const double py = yr.map(fy, bottom, top);
            os << "<line x1=\"" << detail::fmt_coord(left - 5) << "\" y1=\"" << detail::fmt_coord(py)
               << "\" x2=\"" << detail::fmt_coord(left) << "\" y2=\"" << detail::fmt_coord(py)
               << "\" stroke=\"#444\"/>\n";
            os << "<text x=\"" << detail::fmt_coord(left - 8) << "\" y=\"" << detail::fmt_coord(py + 4)
               << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << detail::fmt_tick(fy)
               << "</text>\n";
        }

        os << "<text x=\"" << detail::fmt_coord((left + right) / 2) << "\" y=\""
           << detail::fmt_coord(bottom + 34)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << panel.x_label
           << "</text>\n";
        os << "<text x=\"16\" y=\"" << detail::fmt_coord((top + bottom) / 2)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
           << detail::fmt_coord((top + bottom) / 2) << ")\">" << panel.y_label << "</text>\n";

        for (double h : panel.hlines) {
            const double py = yr.map(h, bottom, top);
            os << "<line x1=\"" << detail::fmt_coord(left) << "\" y1=\"" << detail::fmt_coord(py) << "\" x2=\""
               << detail::fmt_coord(right) << "\" y2=\"" << detail::fmt_coord(py)
               << "\" stroke=\"#555\" stroke-width=\"1\" stroke-dasharray=\"2 4\"/>\n";
            os << "<text x=\"" << detail::fmt_coord(right - 4) << "\" y=\"" << detail::fmt_coord(py - 3)
               << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#555\">"
               << detail::fmt_tick(h) << "</text>\n";
        }

        double legend_x = left + 10;
        for (const auto& s : panel.series) {
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.3\"";
            if (!s.dash.empty()) os << " stroke-dasharray=\"" << s.dash << "\"";
            os << " points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                os << detail::fmt_coord(xr.map(s.x[i], left, right)) << ','
                   << detail::fmt_coord(yr.map(s.y[i], bottom, top));
                if (i + 1 < s.x.size()) os << ' ';
            }
            os << "\"/>\n";

            const double ly = top - 4;
            os << "<line x1=\"" << detail::fmt_coord(legend_x) << "\" y1=\"" << detail::fmt_coord(ly - 4)
               << "\" x2=\"" << detail::fmt_coord(legend_x + 22) << "\" y2=\"" << detail::fmt_coord(ly - 4)
               << "\" stroke=\"" << s.color << "\" stroke-width=\"1.3\"";
            if (!s.dash.empty()) os << " stroke-dasharray=\"" << s.dash << "\"";
            os << "/>\n";
            os << "<text x=\"" << detail::fmt_coord(legend_x + 26) << "\" y=\"" << detail::fmt_coord(ly)
               << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
            legend_x += 26.0 + 8.0 * static_cast<double>(s.label.size()) + 18.0;
        }
    }
    os << "</svg>\n";
}

}  // namespace rabi
