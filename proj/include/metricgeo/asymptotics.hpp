#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "metricgeo/errors.hpp"
#include "metricgeo/function_spec.hpp"

namespace metricgeo {

/// Sampled function data, abscissae strictly increasing, finite values.
struct FunctionSamples {
    std::vector<std::pair<double, double>> points; // (r, value)

    void validate() const {
        if (points.empty())
            throw Error(errc::invalid_params, "empty sample set");
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!std::isfinite(points[i].second))
                throw Error(errc::invalid_params, "non-finite sample value");
            if (i > 0 && !(points[i].first > points[i - 1].first))
                throw Error(errc::invalid_params, "sample abscissae must increase");
        }
    }
};

/// Constants witnessing f(r) <= C1*g(C2*r + C3) + C4 on a window.
struct PreorderFit {
    double c1 = 1.0, c2 = 1.0, c3 = 0.0, c4 = 0.0;
    double residual = 0.0; // max violation over the window; 0 when valid
};

/// Search box for preorder constants; shared with the divergence module's
/// completely-superlinear test.
struct ConstantBox {
    std::vector<double> c1 = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<double> c2 = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<double> c3 = {0.0, 1.0, 4.0, 16.0};
    std::vector<double> c4 = {0.0, 1.0, 4.0, 16.0};
};

enum class GrowthClass {
    Bounded,
    Logarithmic,
    Power,
    Linear,
    Superlinear,
    Inconclusive
};

inline const char* to_string(GrowthClass g) {
    switch (g) {
        case GrowthClass::Bounded: return "bounded";
        case GrowthClass::Logarithmic: return "logarithmic";
        case GrowthClass::Power: return "power";
        case GrowthClass::Linear: return "linear";
        case GrowthClass::Superlinear: return "superlinear";
        case GrowthClass::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct FitReport {
    GrowthClass cls = GrowthClass::Inconclusive;
    std::optional<double> exponent; // for Power (and Linear, where it is ~1)
    double window_lo = 0.0, window_hi = 0.0;
    double r2 = 0.0;             // goodness of the winning model
    std::string diagnostics;

    bool sublinear_class() const {
        return cls == GrowthClass::Bounded || cls == GrowthClass::Logarithmic ||
               (cls == GrowthClass::Power && exponent && *exponent < 0.9);
    }
};

enum class WindowVerdict { SublinearOnWindow, NotSublinearOnWindow, Inconclusive };

inline const char* to_string(WindowVerdict v) {
    switch (v) {
        case WindowVerdict::SublinearOnWindow: return "sublinear-on-window";
        case WindowVerdict::NotSublinearOnWindow: return "not-sublinear-on-window";
        case WindowVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace detail {

struct LinFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
    std::size_t n = 0;
};

inline LinFit least_squares(const std::vector<std::pair<double, double>>& xy) {
    LinFit f;
    f.n = xy.size();
    if (f.n < 2) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : xy) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    double n = static_cast<double>(f.n);
    double den = n * sxx - sx * sx;
    if (den == 0.0) return f;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (auto [x, y] : xy) {
        double e = y - (f.intercept + f.slope * x);
        ss_res += e * e;
    }
    f.r2 = ss_tot <= 0.0 ? 1.0 : std::max(0.0, 1.0 - ss_res / ss_tot);
    return f;
}

/// Tail window: the top half of the samples by index.
inline std::size_t tail_start(std::size_t n) { return n / 2; }

} // namespace detail

/// Window test for lim f(r)/r = 0: the mean ratio on the top half of the
/// samples must drop below half the mean ratio on the bottom half (a mean of
/// zero passes outright).
inline WindowVerdict is_sublinear_window(const FunctionSamples& f) {
    f.validate();
    const auto& pts = f.points;
    if (pts.size() < 8) return WindowVerdict::Inconclusive;
    std::size_t mid = detail::tail_start(pts.size());
    double head = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < mid; ++i)
        head += pts[i].first > 0 ? pts[i].second / pts[i].first : 0.0;
    for (std::size_t i = mid; i < pts.size(); ++i)
        tail += pts[i].first > 0 ? pts[i].second / pts[i].first : 0.0;
    head /= static_cast<double>(mid);
    tail /= static_cast<double>(pts.size() - mid);
    if (tail <= 0.0) return WindowVerdict::SublinearOnWindow;
    return tail < 0.5 * head ? WindowVerdict::SublinearOnWindow
                             : WindowVerdict::NotSublinearOnWindow;
}

/// Smallest-constant witness of f <= C1*g(C2*r + C3) + C4 over f's window,
/// with g interpolated between its samples and extended by boundary values.
/// Constants are searched over the box, minimized lexicographically.
inline std::optional<PreorderFit> preceq_fit(const FunctionSamples& f,
                                             const FunctionSamples& g,
                                             const ConstantBox& box = {}) {
    f.validate();
    g.validate();
    FunctionSpec gfun = FunctionSpec::sampled("g", g.points);
    for (double c1 : box.c1)
        for (double c2 : box.c2)
            for (double c3 : box.c3)
                for (double c4 : box.c4) {
                    bool ok = true;
                    for (auto [r, v] : f.points) {
                        if (v > c1 * gfun(c2 * r + c3) + c4 + 1e-9) {
                            ok = false;
                            break;
                        }
                    }
                    if (ok) {
                        PreorderFit fit;
                        fit.c1 = c1;
                        fit.c2 = c2;
                        fit.c3 = c3;
                        fit.c4 = c4;
                        return fit;
                    }
                }
    return std::nullopt;
}

/// Window growth classification. Bounded is decided from the tail spread,
/// then competing regressions run over the whole window: power
/// (log v ~ log r), logarithmic (v ~ log r), exponential (log v ~ r).
/// Logarithmic beats power only when the local log-log slope decays from the
/// first half of the window to the second; a power law keeps it constant.
/// Scale-invariant: multiplying the values by a constant does not change the
/// class.
inline FitReport classify_growth(const FunctionSamples& f) {
    f.validate();
    FitReport rep;
    const auto& pts = f.points;
    if (pts.size() < 8) {
        rep.diagnostics = "too few samples";
        return rep;
    }
    rep.window_lo = pts.front().first;
    rep.window_hi = pts.back().first;

    std::size_t tail = detail::tail_start(pts.size());
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    for (std::size_t i = tail; i < pts.size(); ++i) {
        vmin = std::min(vmin, pts[i].second);
        vmax = std::max(vmax, pts[i].second);
    }
    // Bounded: relative spread of the tail values is small.
    if (vmax <= 0.0 || vmax - vmin <= 1e-9 + 0.2 * std::abs(vmax)) {
        rep.cls = GrowthClass::Bounded;
        rep.r2 = 1.0;
        return rep;
    }

    // Profiles of the form max(c, f(r)) open with a plateau at c that masks
    // the growth; drop the leading constant run, keeping its last point so
    // the crossover stays in the window.
    std::size_t first = 0;
    {
        std::size_t k = 0;
        while (k < pts.size() && pts[k].second <= pts.front().second + 1e-9) ++k;
        if (k >= 2 && pts.size() - (k - 1) >= 6) first = k - 1;
    }
    const std::vector<std::pair<double, double>> fitpts(pts.begin() + first,
                                                        pts.end());

    std::vector<std::pair<double, double>> semilog_r, semilog_v;
    double vminpos = std::numeric_limits<double>::infinity();
    std::size_t npos = 0;
    for (const auto& [r, v] : fitpts) {
        if (r > 1) semilog_r.emplace_back(std::log(r), v);
        if (r > 0 && v > 0) {
            semilog_v.emplace_back(r, std::log(v));
            vminpos = std::min(vminpos, v);
            ++npos;
        }
    }
    if (npos < 6) {
        rep.diagnostics = "too few positive samples";
        return rep;
    }
    // Power model with an additive offset: v = c + a*r^b. Quantized or
    // epsilon-shifted profiles carry such an offset; subtracting the best one
    // recovers log-log linearity, while log data stays concave for every
    // admissible offset. The offset maximizing R^2 is kept.
    detail::LinFit pow_fit, lo_fit, hi_fit;
    pow_fit.r2 = -1.0;
    for (double frac : {0.0, 0.25, 0.5, 0.75, 0.9}) {
        double c = frac * vminpos;
        std::vector<std::pair<double, double>> loglog;
        for (const auto& [r, v] : fitpts)
            if (r > 0 && v > c) loglog.emplace_back(std::log(r), std::log(v - c));
        if (loglog.size() < 6) continue;
        auto fit = detail::least_squares(loglog);
        if (fit.r2 > pow_fit.r2) {
            pow_fit = fit;
            std::size_t half = loglog.size() / 2;
            lo_fit = detail::least_squares(
                {loglog.begin(), loglog.begin() + static_cast<std::ptrdiff_t>(half)});
            hi_fit = detail::least_squares(
                {loglog.begin() + static_cast<std::ptrdiff_t>(half), loglog.end()});
        }
    }
    auto log_fit = detail::least_squares(semilog_r);
    auto exp_fit = detail::least_squares(semilog_v);

    // Exponential only counts when clearly growing and strictly better than
    // the power model.
    bool exp_wins = exp_fit.n >= 4 && exp_fit.slope > 0 &&
                    exp_fit.r2 > pow_fit.r2 + 0.02 && pow_fit.slope > 1.1;
    bool log_wins = !exp_wins && log_fit.n >= 4 && log_fit.slope > 0 &&
                    log_fit.r2 >= 0.85 && lo_fit.slope > 0.05 &&
                    hi_fit.slope < 0.75 * lo_fit.slope;
    if (exp_wins) {
        rep.cls = GrowthClass::Superlinear;
        rep.r2 = exp_fit.r2;
        rep.diagnostics = "exponential-looking tail";
        return rep;
    }
    if (log_wins) {
        rep.cls = GrowthClass::Logarithmic;
        rep.r2 = log_fit.r2;
        return rep;
    }
    rep.r2 = pow_fit.r2;
    if (pow_fit.r2 < 0.85) {
        rep.diagnostics = "no model reaches the R^2 threshold";
        return rep;
    }
    rep.exponent = pow_fit.slope;
    if (pow_fit.slope >= 0.9 && pow_fit.slope <= 1.1)
        rep.cls = GrowthClass::Linear;
    else
        rep.cls = GrowthClass::Power;
    return rep;
}

/// Minimal n with (Id - rho)^n(x) in [A', A), A' = A - rho(A). Each step
/// decreases x by at least rho(A) > 0, so the iteration terminates.
inline std::size_t abel_steps(const FunctionSpec& rho, double A, double x) {
    double rA = rho(A);
    if (!(rA > 0.0))
        throw Error(errc::invalid_function, "abel_steps requires rho(A) > 0");
    double a_prime = A - rA;
    if (x < a_prime - 1e-9)
        throw Error(errc::out_of_domain, "abel_steps argument below A - rho(A)");
    std::size_t n = 0;
    while (x >= A - 1e-12) {
        x -= rho(x);
        ++n;
        if (n > 100000)
            throw Error(errc::invalid_function, "abel_steps did not terminate");
    }
    return n;
}

} // namespace metricgeo
