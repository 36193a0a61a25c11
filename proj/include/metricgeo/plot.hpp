#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "metricgeo/asymptotics.hpp"
#include "metricgeo/errors.hpp"

namespace metricgeo {

/// First two CSV columns of any profile schema: abscissa and value, with
/// `inf` parsed as an absent value.
struct PlotData {
    std::vector<double> r;
    std::vector<std::optional<double>> value;
    std::string x_label = "r";
    std::string y_label = "value";
};

inline PlotData parse_profile_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.empty())
        throw Error(errc::bad_input, "empty CSV");
    PlotData d;
    {
        std::istringstream hs(line);
        std::string col;
        if (std::getline(hs, col, ',')) d.x_label = col;
        if (std::getline(hs, col, ',')) d.y_label = col;
        else throw Error(errc::bad_input, "CSV header needs at least two columns");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ','))
            throw Error(errc::bad_input,
                        "CSV row " + std::to_string(lineno) + " too short");
        try {
            d.r.push_back(std::stod(a));
        } catch (...) {
            throw Error(errc::bad_input,
                        "bad abscissa on CSV row " + std::to_string(lineno));
        }
        if (b == "inf") {
            d.value.emplace_back(std::nullopt);
        } else {
            try {
                d.value.emplace_back(std::stod(b));
            } catch (...) {
                throw Error(errc::bad_input,
                            "bad value on CSV row " + std::to_string(lineno));
            }
        }
    }
    if (d.r.empty()) throw Error(errc::bad_input, "CSV has no data rows");
    return d;
}

namespace detail {

struct Panel {
    double x0, y0, w, h;          // pixel rectangle
    double lo_x, hi_x, lo_y, hi_y; // data range

    double px(double x) const {
        double t = hi_x > lo_x ? (x - lo_x) / (hi_x - lo_x) : 0.5;
        return x0 + t * w;
    }
    double py(double y) const {
        double t = hi_y > lo_y ? (y - lo_y) / (hi_y - lo_y) : 0.5;
        return y0 + h - t * h;
    }
};

inline void svg_points(std::ostringstream& out, const Panel& p,
                       const std::vector<std::pair<double, double>>& pts) {
    out << "<polyline fill='none' stroke='#1f77b4' stroke-width='1.5' points='";
    for (auto [x, y] : pts) out << p.px(x) << "," << p.py(y) << " ";
    out << "'/>\n";
    for (auto [x, y] : pts)
        out << "<circle cx='" << p.px(x) << "' cy='" << p.py(y)
            << "' r='2.4' fill='#1f77b4'/>\n";
}

inline void svg_frame(std::ostringstream& out, const Panel& p,
                      const std::string& title) {
    out << "<rect x='" << p.x0 << "' y='" << p.y0 << "' width='" << p.w
        << "' height='" << p.h
        << "' fill='none' stroke='#444' stroke-width='1'/>\n";
    out << "<text x='" << p.x0 + p.w / 2 << "' y='" << p.y0 - 8
        << "' text-anchor='middle' font-size='13' font-family='sans-serif'>"
        << title << "</text>\n";
}

} // namespace detail

/// Static two-panel SVG: linear and log-log views, a growth-class annotation
/// from the finite samples, and a margin band marking radii whose value is
/// infinite.
inline std::string render_plot_svg(const PlotData& d, const std::string& title) {
    std::vector<std::pair<double, double>> finite, loglog;
    std::vector<double> inf_r;
    for (std::size_t i = 0; i < d.r.size(); ++i) {
        if (d.value[i]) {
            finite.emplace_back(d.r[i], *d.value[i]);
            if (d.r[i] > 0.0 && *d.value[i] > 0.0)
                loglog.emplace_back(std::log10(d.r[i]), std::log10(*d.value[i]));
        } else {
            inf_r.push_back(d.r[i]);
        }
    }
    std::string cls = "n/a";
    if (finite.size() >= 8) {
        FunctionSamples fs;
        fs.points = finite;
        FitReport rep = classify_growth(fs);
        std::ostringstream cs;
        cs << to_string(rep.cls);
        if (rep.exponent) cs << " (alpha=" << *rep.exponent << ")";
        cls = cs.str();
    }

    auto range = [](const std::vector<std::pair<double, double>>& pts, bool ys) {
        double lo = 0.0, hi = 1.0;
        if (!pts.empty()) {
            lo = hi = ys ? pts[0].second : pts[0].first;
            for (auto [x, y] : pts) {
                double v = ys ? y : x;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi == lo) hi = lo + 1.0;
        }
        return std::pair<double, double>{lo, hi};
    };

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='960' height='440' "
           "viewBox='0 0 960 440'>\n";
    out << "<rect width='960' height='440' fill='white'/>\n";
    out << "<text x='480' y='24' text-anchor='middle' font-size='16' "
           "font-family='sans-serif'>"
        << title << " [" << cls << "]</text>\n";

    auto [lxl, lxh] = range(finite, false);
    auto [lyl, lyh] = range(finite, true);
    detail::Panel lin{60, 60, 380, 320, lxl, lxh, lyl, lyh};
    detail::svg_frame(out, lin, "linear (" + d.x_label + " vs " + d.y_label + ")");
    if (!finite.empty()) detail::svg_points(out, lin, finite);

    auto [gxl, gxh] = range(loglog, false);
    auto [gyl, gyh] = range(loglog, true);
    detail::Panel lg{540, 60, 380, 320, gxl, gxh, gyl, gyh};
    detail::svg_frame(out, lg, "log-log");
    if (!loglog.empty()) detail::svg_points(out, lg, loglog);

    // Infinite values get a tick in a band above the linear panel.
    if (!inf_r.empty()) {
        out << "<text x='60' y='52' font-size='11' "
               "font-family='sans-serif' fill='#d62728'>inf at:</text>\n";
        for (double r : inf_r) {
            double x = lin.px(std::min(std::max(r, lin.lo_x), lin.hi_x));
            out << "<line x1='" << x << "' y1='44' x2='" << x
                << "' y2='56' stroke='#d62728' stroke-width='1.5'/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace metricgeo
