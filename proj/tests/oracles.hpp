#pragma once

// Independent brute-force oracles for small spaces. Deliberately naive: array
// Dijkstra without a heap, exhaustive pair enumeration, exhaustive (r, s)
// divergence. Shared by the unit tests and the acceptance gate.

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "metricgeo/divergence.hpp"
#include "metricgeo/projection.hpp"
#include "metricgeo/spaces.hpp"

namespace oracle {

using namespace metricgeo;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Array Dijkstra (no heap): repeatedly settle the unsettled vertex with the
/// smallest distance, smallest id on ties. Relaxation order is by target id,
/// so path sums accumulate in the same order as the library's engine.
inline std::vector<double> sssp(const MetricGraph& g, VertexId src,
                                const std::vector<char>* blocked = nullptr) {
    std::size_t n = g.vertex_count();
    std::vector<double> dist(n, kInf);
    std::vector<char> done(n, 0);
    dist[src] = 0.0;
    for (std::size_t it = 0; it < n; ++it) {
        VertexId u = kNoVertex;
        for (VertexId v = 0; v < n; ++v)
            if (!done[v] && dist[v] < kInf && (u == kNoVertex || dist[v] < dist[u]))
                u = v;
        if (u == kNoVertex) break;
        done[u] = 1;
        g.for_each_neighbor(u, [&](VertexId v, Length w) {
            if (blocked && (*blocked)[v]) return;
            if (dist[u] + w < dist[v]) dist[v] = dist[u] + w;
        });
    }
    return dist;
}

inline std::vector<std::vector<double>> all_pairs(const MetricGraph& g) {
    std::vector<std::vector<double>> d;
    for (VertexId v = 0; v < g.vertex_count(); ++v) d.push_back(sssp(g, v));
    return d;
}

inline double dist_to_Y(const std::vector<double>& row, const PointSet& Y) {
    double best = kInf;
    for (VertexId y : Y) best = std::min(best, row[y]);
    return best;
}

inline PointSet project(const std::vector<double>& row, const PointSet& Y,
                        double eps) {
    double dY = dist_to_Y(row, Y);
    PointSet out;
    for (VertexId y : Y)
        if (row[y] <= dY + eps) out.push_back(y);
    return out;
}

/// Exhaustive contraction profile by the definition: for every ordered base
/// point x and every v with d(x,v) <= rho1(d(x,Y)), the diameter of
/// pi(x) union pi(v); value(r) is the max over d(x,Y) <= r.
inline std::vector<double> contraction_values(
    const MarkedSpace& s, double eps, const FunctionSpec& rho1,
    const std::vector<double>& r_grid,
    const std::vector<std::vector<double>>& ap) {
    std::size_t n = s.graph.vertex_count();
    std::vector<double> dY(n), diam_at(n, 0.0);
    std::vector<PointSet> proj(n);
    for (VertexId v = 0; v < n; ++v) {
        dY[v] = dist_to_Y(ap[v], s.Y);
        proj[v] = project(ap[v], s.Y, eps);
    }
    for (VertexId x = 0; x < n; ++x) {
        double radius = std::max(0.0, rho1(dY[x]));
        double best = 0.0;
        for (VertexId v = 0; v < n; ++v) {
            if (ap[x][v] > radius + 1e-12) continue;
            for (VertexId p : proj[x])
                for (VertexId q : proj[v]) best = std::max(best, ap[p][q]);
        }
        diam_at[x] = best;
    }
    std::vector<double> out;
    for (double r : r_grid) {
        double best = 0.0;
        for (VertexId x = 0; x < n; ++x)
            if (dY[x] <= r + 1e-12) best = std::max(best, diam_at[x]);
        out.push_back(best);
    }
    return out;
}

/// Exhaustive lambda-divergence at one (r, t): forbidden ball from the array
/// Dijkstra, then a blocked array Dijkstra between the offset points.
inline std::optional<double> lambda_div(const MarkedSpace& s, double r, double t,
                                        const DivergenceParams& dp) {
    const ParamPath& gamma = *s.gamma;
    auto at = [&](double pos) {
        std::size_t best = 0;
        double err = kInf;
        for (std::size_t k = 0; k < gamma.cum.size(); ++k) {
            double e = std::abs(gamma.cum[k] - pos);
            if (e < err - 1e-12) {
                err = e;
                best = k;
            }
        }
        return gamma.points[best];
    };
    VertexId center = at(t), from = at(t - r), to = at(t + r);
    double radius = dp.forbidden_radius(r);
    std::vector<double> ball = sssp(s.graph, center);
    std::vector<char> blocked(s.graph.vertex_count(), 0);
    if (radius >= 0.0)
        for (VertexId v = 0; v < s.graph.vertex_count(); ++v)
            if (ball[v] <= radius) blocked[v] = 1;
    if (blocked[from] || blocked[to]) return std::nullopt;
    std::vector<double> d = sssp(s.graph, from, &blocked);
    if (d[to] == kInf) return std::nullopt;
    return d[to];
}

} // namespace oracle
