#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "metricgeo/asymptotics.hpp"
#include "metricgeo/errors.hpp"
#include "metricgeo/metric_graph.hpp"
#include "metricgeo/parallel.hpp"
#include "metricgeo/projection.hpp"
#include "metricgeo/spaces.hpp"

namespace metricgeo {

struct DivergenceParams {
    double L = 1.0;      // >= 1
    double A = 0.0;      // >= 0
    double lambda = 0.5; // in (0, 1]
    double kappa = 2.0;  // >= L + A

    void validate() const {
        if (L < 1.0 || A < 0.0)
            throw Error(errc::invalid_params, "need L >= 1, A >= 0");
        if (!(lambda > 0.0) || lambda > 1.0)
            throw Error(errc::invalid_params, "need lambda in (0,1]");
        if (kappa < L + A)
            throw Error(errc::invalid_params, "need kappa >= L + A");
    }

    double forbidden_radius(double r) const {
        return lambda * (r / L - A) - kappa;
    }
};

struct DivergenceSample {
    double r = 0.0;
    std::optional<double> value; // absent = infinity
    double witness_s = 0.0;
    VertexId center = kNoVertex; // gamma(s)
    VertexId from = kNoVertex;   // gamma(s - r)
    VertexId to = kNoVertex;     // gamma(s + r)
};

struct DivergenceProfile {
    std::vector<DivergenceSample> samples;
    DivergenceParams params;
    std::string s_grid_desc;
    Length valid_radius = 0.0;
};

namespace detail {

/// Vertex of gamma nearest to arc parameter t; earlier vertex on ties.
inline std::size_t gamma_index_at(const ParamPath& gamma, double t) {
    const auto& cum = gamma.cum;
    auto it = std::lower_bound(cum.begin(), cum.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - cum.begin());
    if (hi == 0) return 0;
    if (hi >= cum.size()) return cum.size() - 1;
    double d_hi = cum[hi] - t, d_lo = t - cum[hi - 1];
    return d_lo <= d_hi ? hi - 1 : hi;
}

} // namespace detail

/// Length of the shortest path from gamma(t-r) to gamma(t+r) avoiding the
/// closed ball of radius lambda(r/L - A) - kappa around gamma(t); absent
/// means no such path (infinite divergence). A non-positive radius leaves
/// the ball empty.
inline std::optional<Length> lambda_divergence(const MarkedSpace& s, double r,
                                               double t, const DivergenceParams& dp,
                                               ParamPath* witness_path = nullptr) {
    dp.validate();
    if (!s.gamma)
        throw Error(errc::invalid_query, "space has no marked path gamma");
    const ParamPath& gamma = *s.gamma;
    if (r <= 0.0)
        throw Error(errc::invalid_params, "radius must be positive");
    if (t - r < -1e-9 || t + r > gamma.length() + 1e-9)
        throw Error(errc::window_violation, "t +- r outside gamma's range");
    VertexId a = gamma.points[detail::gamma_index_at(gamma, t - r)];
    VertexId b = gamma.points[detail::gamma_index_at(gamma, t + r)];
    VertexId c = gamma.points[detail::gamma_index_at(gamma, t)];
    double radius = dp.forbidden_radius(r);
    if (radius < 0.0) {
        if (witness_path) *witness_path = s.graph.geodesic(a, b);
        return s.graph.distance(a, b);
    }
    DijkstraOptions opts;
    opts.radius_limit = radius;
    ShortestPathTree ball = s.graph.shortest_paths(c, opts);
    if (ball.dist[a] <= radius || ball.dist[b] <= radius) return std::nullopt;
    PointSet forbidden;
    for (VertexId v = 0; v < s.graph.vertex_count(); ++v)
        if (ball.dist[v] <= radius) forbidden.push_back(v);
    std::optional<ParamPath> path = s.graph.avoid_shortest_path(a, b, forbidden);
    if (!path) return std::nullopt;
    Length len = path->length();
    if (witness_path) *witness_path = std::move(*path);
    return len;
}

/// Default s-grid: every gamma vertex position when gamma is small, else all
/// landmark positions plus a 128-point stride (landmarks carry the
/// constructions' divergence minimizers).
inline std::vector<double> default_s_grid(const MarkedSpace& s) {
    if (!s.gamma)
        throw Error(errc::invalid_query, "space has no marked path gamma");
    const ParamPath& gamma = *s.gamma;
    std::vector<double> grid;
    if (gamma.size() <= 512) {
        grid.assign(gamma.cum.begin(), gamma.cum.end());
    } else {
        std::vector<double> vpos(s.graph.vertex_count(),
                                 std::numeric_limits<double>::quiet_NaN());
        for (std::size_t k = 0; k < gamma.size(); ++k)
            vpos[gamma.points[k]] = gamma.cum[k];
        for (auto& [name, v] : s.landmarks)
            if (!std::isnan(vpos[v])) grid.push_back(vpos[v]);
        std::size_t stride = gamma.size() / 128 + 1;
        for (std::size_t k = 0; k < gamma.size(); k += stride)
            grid.push_back(gamma.cum[k]);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

/// Divergence sweep: for each r, the minimum of lambda_divergence over the
/// admissible s-grid; ties go to the smallest s. Infinite cells propagate
/// (absent), and min(finite, inf) = finite.
inline DivergenceProfile divergence_profile(const MarkedSpace& s,
                                            const DivergenceParams& dp,
                                            const std::vector<double>& r_grid,
                                            const std::vector<double>& s_grid,
                                            unsigned jobs = 1) {
    dp.validate();
    if (!s.gamma)
        throw Error(errc::invalid_query, "space has no marked path gamma");
    if (r_grid.empty() || s_grid.empty())
        throw Error(errc::invalid_params, "empty grid");
    if (r_grid.back() > s.meta.valid_radius + 1e-9)
        throw Error(errc::window_violation, "radius grid exceeds valid radius");
    double glen = s.gamma->length();
    struct Cell {
        double r, t;
    };
    std::vector<Cell> cells;
    std::vector<std::size_t> r_cell_count(r_grid.size(), 0);
    for (std::size_t ri = 0; ri < r_grid.size(); ++ri) {
        double r = r_grid[ri];
        for (double t : s_grid)
            if (t - r >= -1e-9 && t + r <= glen + 1e-9) {
                cells.push_back({r, t});
                ++r_cell_count[ri];
            }
    }
    for (std::size_t ri = 0; ri < r_grid.size(); ++ri)
        if (r_cell_count[ri] == 0)
            throw Error(errc::window_violation,
                        "no admissible s for radius " + std::to_string(r_grid[ri]));

    struct CellResult {
        double r, t;
        std::optional<double> value;
    };
    using Results = std::vector<CellResult>;
    Results res = parallel_chunked<Results>(
        cells.size(), Results{},
        [&](std::size_t lo, std::size_t hi) {
            Results part;
            part.reserve(hi - lo);
            for (std::size_t k = lo; k < hi; ++k)
                part.push_back(
                    {cells[k].r, cells[k].t,
                     lambda_divergence(s, cells[k].r, cells[k].t, dp)});
            return part;
        },
        [](Results& acc, const Results& p) {
            acc.insert(acc.end(), p.begin(), p.end());
        },
        jobs);

    DivergenceProfile prof;
    prof.params = dp;
    prof.valid_radius = s.meta.valid_radius;
    prof.s_grid_desc = std::to_string(s_grid.size()) + " s-values";
    std::size_t idx = 0;
    for (std::size_t ri = 0; ri < r_grid.size(); ++ri) {
        DivergenceSample best;
        best.r = r_grid[ri];
        bool first = true;
        for (std::size_t k = 0; k < r_cell_count[ri]; ++k, ++idx) {
            const CellResult& c = res[idx];
            bool better = first;
            if (!first && c.value) {
                if (!best.value || *c.value < *best.value) better = true;
            }
            if (better) {
                first = false;
                best.value = c.value;
                best.witness_s = c.t;
                const ParamPath& g = *s.gamma;
                best.center = g.points[detail::gamma_index_at(g, c.t)];
                best.from = g.points[detail::gamma_index_at(g, c.t - c.r)];
                best.to = g.points[detail::gamma_index_at(g, c.t + c.r)];
            }
        }
        prof.samples.push_back(best);
    }
    return prof;
}

inline FunctionSamples finite_samples(const DivergenceProfile& p) {
    FunctionSamples f;
    for (const DivergenceSample& s : p.samples)
        if (s.value) f.points.emplace_back(s.r, *s.value);
    return f;
}

struct RobustnessResult {
    FitReport fit1, fit2;
    std::optional<PreorderFit> forward, backward; // profile1 vs profile2
    bool equivalent_on_window = false;
};

/// Lemma-level robustness: two parameter sets must give profiles equivalent
/// up to the preorder on the shared finite window.
inline RobustnessResult parameter_robustness_check(const MarkedSpace& s,
                                                   const DivergenceParams& dp1,
                                                   const DivergenceParams& dp2,
                                                   const std::vector<double>& r_grid,
                                                   const std::vector<double>& s_grid,
                                                   unsigned jobs = 1) {
    DivergenceProfile p1 = divergence_profile(s, dp1, r_grid, s_grid, jobs);
    DivergenceProfile p2 = divergence_profile(s, dp2, r_grid, s_grid, jobs);
    FunctionSamples f1, f2;
    for (std::size_t k = 0; k < p1.samples.size(); ++k) {
        if (p1.samples[k].value && p2.samples[k].value) {
            f1.points.emplace_back(p1.samples[k].r, *p1.samples[k].value);
            f2.points.emplace_back(p2.samples[k].r, *p2.samples[k].value);
        }
    }
    RobustnessResult out;
    if (f1.points.size() < 2) return out;
    out.fit1 = classify_growth(f1);
    out.fit2 = classify_growth(f2);
    out.forward = preceq_fit(f1, f2);
    out.backward = preceq_fit(f2, f1);
    out.equivalent_on_window = out.forward.has_value() && out.backward.has_value();
    return out;
}

enum class SuperlinearVerdict { SuperlinearOnWindow, LinearWitness, Inconclusive };

inline const char* to_string(SuperlinearVerdict v) {
    switch (v) {
        case SuperlinearVerdict::SuperlinearOnWindow: return "superlinear-on-window";
        case SuperlinearVerdict::LinearWitness: return "linear-witness";
        case SuperlinearVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct SuperlinearResult {
    SuperlinearVerdict verdict = SuperlinearVerdict::Inconclusive;
    std::vector<double> witness_radii; // captured radii for a linear witness
    double c1 = 0, c2 = 0, c3 = 0, c4 = 0;
};

/// Finite-window test for completely superlinear divergence: a linear witness
/// is a constant choice capturing at least half of the tail-window radii;
/// infinite values are never captured (and an all-infinite profile passes
/// vacuously).
inline SuperlinearResult completely_superlinear_test(const DivergenceProfile& p,
                                                     const ConstantBox& box = {}) {
    SuperlinearResult out;
    bool any_finite = false;
    for (const auto& s : p.samples)
        if (s.value) any_finite = true;
    if (!any_finite) {
        out.verdict = SuperlinearVerdict::SuperlinearOnWindow;
        return out;
    }
    if (p.samples.size() < 8) return out;
    std::size_t lo = p.samples.size() / 2;
    std::size_t tail_n = p.samples.size() - lo;
    for (double c1 : box.c1)
        for (double c2 : box.c2)
            for (double c3 : box.c3)
                for (double c4 : box.c4) {
                    std::vector<double> captured;
                    for (std::size_t k = lo; k < p.samples.size(); ++k) {
                        const auto& s = p.samples[k];
                        if (s.value && *s.value <= c1 * (c2 * s.r + c3) + c4 + 1e-9)
                            captured.push_back(s.r);
                    }
                    if (captured.size() * 2 >= tail_n) {
                        out.verdict = SuperlinearVerdict::LinearWitness;
                        out.witness_radii = std::move(captured);
                        out.c1 = c1;
                        out.c2 = c2;
                        out.c3 = c3;
                        out.c4 = c4;
                        return out;
                    }
                }
    out.verdict = SuperlinearVerdict::SuperlinearOnWindow;
    return out;
}

} // namespace metricgeo
