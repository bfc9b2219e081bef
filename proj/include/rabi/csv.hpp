#pragma once

// CSV emission and parsing for the artifact's two tabular formats:
//
//   trajectory:  tau,alpha10,alpha20,alpha30
//   error curve: epsilon,E_R,E_RN,E_R_RWA          (knots)
//                epsilon,E_R_spline,E_RN_spline,E_R_RWA_spline  (10x density)
//
// Values are printed with %.15g (15 significant digits), '.' decimal point,
// LF line endings; output for the same inputs is byte-identical from run to
// run, which the plotting side relies on.

#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rabi/closed_form.hpp"
#include "rabi/sweep.hpp"

namespace rabi {

inline std::string fmt_g15(double v) {
    if (v == 0.0) return "0";  // fold negative zero; CSV never distinguishes it
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
    if (t.taus.size() != t.points.size()) {
        throw std::invalid_argument("write_trajectory_csv: ragged trajectory");
    }
    os << "tau,alpha10,alpha20,alpha30\n";
    for (std::size_t i = 0; i < t.taus.size(); ++i) {
        os << fmt_g15(t.taus[i]) << ',' << fmt_g15(t.points[i].x) << ',' << fmt_g15(t.points[i].y) << ','
           << fmt_g15(t.points[i].z) << '\n';
    }
}

inline void write_error_curve_csv(std::ostream& os, const ErrorCurve& c) {
    os << "epsilon,E_R,E_RN,E_R_RWA\n";
    for (std::size_t i = 0; i < c.eps_values.size(); ++i) {
        os << fmt_g15(c.eps_values[i]) << ',' << fmt_g15(c.e_r[i]) << ',' << fmt_g15(c.e_rn[i]) << ','
           << fmt_g15(c.e_rwa[i]) << '\n';
    }
}

// Spline curves sampled at ten times the knot density (uniform in eps across
// the knot range, endpoints included).
inline void write_error_curve_spline_csv(std::ostream& os, const ErrorCurve& c) {
    if (!c.spline_r || !c.spline_rn || !c.spline_rwa) {
        throw std::invalid_argument("write_error_curve_spline_csv: curve has no splines (fewer than 4 knots)");
    }
    const std::size_t n = 10 * (c.eps_values.size() - 1) + 1;
    const double lo = c.eps_values.front();
    const double hi = c.eps_values.back();
    os << "epsilon,E_R_spline,E_RN_spline,E_R_RWA_spline\n";
    for (std::size_t j = 0; j < n; ++j) {
        const double e =
            (j + 1 == n) ? hi : lo + static_cast<double>(j) * (hi - lo) / static_cast<double>(n - 1);
        os << fmt_g15(e) << ',' << fmt_g15((*c.spline_r)(e)) << ',' << fmt_g15((*c.spline_rn)(e)) << ','
           << fmt_g15((*c.spline_rwa)(e)) << '\n';
    }
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;  // column-major
};

inline CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("read_csv: empty input");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) t.header.push_back(cell);
    }
    if (t.header.empty()) throw std::runtime_error("read_csv: empty header");
    t.columns.resize(t.header.size());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(ss, cell, ',')) {
            if (col >= t.columns.size()) throw std::runtime_error("read_csv: row wider than header");
            t.columns[col].push_back(std::stod(cell));
            ++col;
        }
        if (col != t.columns.size()) throw std::runtime_error("read_csv: row narrower than header");
    }
    return t;
}

}  // namespace rabi
