#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "metricgeo/errors.hpp"
#include "metricgeo/function_spec.hpp"
#include "metricgeo/metric_graph.hpp"

namespace metricgeo {

struct SpaceMeta {
    std::string family;
    std::map<std::string, double> params;
    std::map<std::string, std::string> fn_params; // function-valued parameters
    std::size_t truncation_index = 0;
    Length extent = 0.0;       // double-sweep diameter estimate
    Length valid_radius = 0.0; // extent / 4; analyzers clip windows to this
    // (label, delta) for every length rounded during construction.
    std::vector<std::pair<std::string, double>> rounding_log;
};

/// Graph plus its marked subspace Y, optional marked path gamma (present when
/// Y is a path, traversing exactly Y in order), and named landmark vertices.
struct MarkedSpace {
    MetricGraph graph;
    PointSet Y;
    std::optional<ParamPath> gamma;
    std::map<std::string, VertexId> landmarks;
    SpaceMeta meta;

    std::vector<char> y_mask() const {
        std::vector<char> m(graph.vertex_count(), 0);
        for (VertexId v : Y) m[v] = 1;
        return m;
    }

    VertexId landmark(const std::string& name) const {
        auto it = landmarks.find(name);
        if (it == landmarks.end())
            throw Error(errc::invalid_query, "no landmark named '" + name + "'");
        return it->second;
    }
};

/// Abel-recursion data: sigma(0) = A - rho(A), sigma(i+1) = phi^{-1}(sigma(i))
/// with phi(x) = x - rho(x).
struct AbelData {
    FunctionSpec rho;
    Length A = 0.0;
    Length A_prime = 0.0; // A - rho(A)
    std::vector<Length> sigma;
};

namespace detail {

/// phi(x) = x - rho(x) is strictly increasing above A under the validated
/// hypotheses; invert by expanding bisection.
inline double phi_inverse(const FunctionSpec& rho, double target, double lo,
                          double tol = 1e-9) {
    auto phi = [&](double x) { return x - rho(x); };
    double hi = std::max(lo + 1.0, 2.0 * lo);
    int guard = 0;
    while (phi(hi) < target) {
        hi = 2.0 * hi + 1.0;
        if (++guard > 200)
            throw Error(errc::invalid_function, "phi inversion does not reach target");
    }
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (phi(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline Length double_sweep_extent(const MetricGraph& g) {
    ShortestPathTree t0 = g.shortest_paths(0);
    VertexId far = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (t0.dist[v] > t0.dist[far]) far = v;
    ShortestPathTree t1 = g.shortest_paths(far);
    Length ext = 0.0;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        ext = std::max(ext, t1.dist[v]);
    return ext;
}

inline void finish_meta(MarkedSpace& s) {
    s.meta.extent = double_sweep_extent(s.graph);
    s.meta.valid_radius = s.meta.extent / 4.0;
}

/// Append a fresh chain of `len` unit edges starting from `from`; returns the
/// final vertex. len = 0 returns `from`.
inline VertexId append_chain(std::vector<Edge>& edges, std::size_t& next_id,
                             VertexId from, std::size_t len,
                             std::vector<VertexId>* out = nullptr) {
    VertexId cur = from;
    for (std::size_t k = 0; k < len; ++k) {
        VertexId nv = static_cast<VertexId>(next_id++);
        edges.push_back({cur, nv, 1.0});
        if (out) out->push_back(nv);
        cur = nv;
    }
    return cur;
}

inline long long round_len(double x, const std::string& label, SpaceMeta& meta) {
    long long r = std::llround(x);
    if (std::abs(x - static_cast<double>(r)) > 1e-12)
        meta.rounding_log.emplace_back(label, static_cast<double>(r) - x);
    return r;
}

} // namespace detail

/// Validates the hypotheses of the Abel recursion on a sample grid and builds
/// the sigma sequence with n+1 terms.
inline AbelData sigma_sequence(const FunctionSpec& rho, Length A, std::size_t n) {
    double rA = rho(A);
    if (!(rA > 0.0))
        throw Error(errc::invalid_function, "need rho(A) > 0");
    // Sample-grid validation: non-decreasing, rho(r) <= r, unbounded-looking,
    // and 0 <= rho(a+b) - rho(a) < b for a >= A, b > 0.
    std::vector<double> grid;
    for (double a = A; a <= A + 1024.0; a = a * 2.0 + 1.0) grid.push_back(a);
    double prev = rho(grid.front());
    for (double a : grid) {
        double v = rho(a);
        if (v < prev - 1e-12)
            throw Error(errc::invalid_function, "rho must be non-decreasing");
        if (v > a + 1e-12)
            throw Error(errc::invalid_function, "rho(r) <= r required");
        prev = v;
    }
    if (!(rho(A + 1e6) > rA + 1e-9))
        throw Error(errc::invalid_function, "rho must be unbounded");
    for (double a : grid)
        for (double b : {0.5, 1.0, 3.0, 17.0, 257.0}) {
            double diff = rho(a + b) - rho(a);
            if (diff < -1e-12 || diff >= b - 1e-12)
                throw Error(errc::invalid_function,
                            "need 0 <= rho(a+b) - rho(a) < b on the grid");
        }
    AbelData d;
    d.rho = rho;
    d.A = A;
    d.A_prime = A - rA;
    d.sigma.push_back(d.A_prime);
    for (std::size_t i = 0; i < n; ++i) {
        // phi is only monotone from A on; invert on that branch.
        double nxt = detail::phi_inverse(rho, d.sigma.back(),
                                         std::max(d.sigma.back(), A));
        if (!(nxt > d.sigma.back() + rA - 1e-6))
            throw Error(errc::invalid_function, "sigma gaps must be >= rho(A)");
        d.sigma.push_back(nxt);
    }
    return d;
}

/// Cycle of circumference n with Y the arc {v0..v_arc_len}.
inline MarkedSpace make_cycle_arc(std::size_t n, std::size_t arc_len) {
    if (n < 3 || arc_len + 1 >= n)
        throw Error(errc::invalid_params, "cycle_arc needs 3 <= arc_len+2 <= n");
    std::vector<Edge> edges;
    for (std::size_t v = 0; v + 1 < n; ++v)
        edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>(v + 1), 1.0});
    edges.push_back({static_cast<VertexId>(n - 1), 0, 1.0});
    MarkedSpace s{MetricGraph(n, edges), {}, std::nullopt, {}, {}};
    for (std::size_t v = 0; v <= arc_len; ++v) s.Y.push_back(static_cast<VertexId>(v));
    s.gamma = s.graph.make_path(s.Y);
    s.landmarks["arc_start"] = 0;
    s.landmarks["arc_end"] = static_cast<VertexId>(arc_len);
    s.landmarks["antipode"] = static_cast<VertexId>((arc_len / 2 + n / 2) % n);
    s.meta.family = "cycle_arc";
    s.meta.params = {{"n", double(n)}, {"arc_len", double(arc_len)}};
    detail::finish_meta(s);
    return s;
}

/// Complete `branching`-ary tree of the given depth; Y is the leftmost
/// root-to-leaf ray (a convex subtree).
inline MarkedSpace make_tree(std::size_t branching, std::size_t depth) {
    if (branching < 2 || depth < 1)
        throw Error(errc::invalid_params, "tree needs branching >= 2, depth >= 1");
    std::vector<std::size_t> level_start{0};
    std::size_t count = 1, width = 1;
    for (std::size_t l = 0; l < depth; ++l) {
        level_start.push_back(count);
        width *= branching;
        count += width;
    }
    std::vector<Edge> edges;
    for (std::size_t l = 0; l < depth; ++l) {
        std::size_t w = level_start[l + 1] - level_start[l];
        for (std::size_t k = 0; k < w; ++k) {
            VertexId parent = static_cast<VertexId>(level_start[l] + k);
            for (std::size_t c = 0; c < branching; ++c) {
                VertexId child =
                    static_cast<VertexId>(level_start[l + 1] + k * branching + c);
                edges.push_back({parent, child, 1.0});
            }
        }
    }
    MarkedSpace s{MetricGraph(count, edges), {}, std::nullopt, {}, {}};
    for (std::size_t l = 0; l <= depth; ++l)
        s.Y.push_back(static_cast<VertexId>(level_start[l]));
    s.gamma = s.graph.make_path(s.Y);
    s.landmarks["root"] = 0;
    s.landmarks["ray_leaf"] = s.Y.back();
    s.meta.family = "tree";
    s.meta.params = {{"branching", double(branching)}, {"depth", double(depth)}};
    detail::finish_meta(s);
    return s;
}

/// (width+1) x (height+1) unit grid (the L1 plane sampled at integer points);
/// Y = gamma = the horizontal axis j=0.
inline MarkedSpace make_grid_l1(std::size_t width, std::size_t height) {
    if (width < 1 || height < 1)
        throw Error(errc::invalid_params, "grid_l1 needs width, height >= 1");
    std::size_t w1 = width + 1, h1 = height + 1;
    auto id = [&](std::size_t i, std::size_t j) {
        return static_cast<VertexId>(j * w1 + i);
    };
    std::vector<Edge> edges;
    for (std::size_t j = 0; j < h1; ++j)
        for (std::size_t i = 0; i < w1; ++i) {
            if (i + 1 < w1) edges.push_back({id(i, j), id(i + 1, j), 1.0});
            if (j + 1 < h1) edges.push_back({id(i, j), id(i, j + 1), 1.0});
        }
    MarkedSpace s{MetricGraph(w1 * h1, edges), {}, std::nullopt, {}, {}};
    for (std::size_t i = 0; i < w1; ++i) s.Y.push_back(id(i, 0));
    s.gamma = s.graph.make_path(s.Y);
    s.landmarks["origin"] = id(0, 0);
    s.landmarks["far_corner"] = id(width, height);
    s.meta.family = "grid_l1";
    s.meta.params = {{"width", double(width)}, {"height", double(height)}};
    detail::finish_meta(s);
    return s;
}

/// Ray Y = [0,n] with spur Z_i of length sigma(i) at each integer i (tip z_i)
/// and bridge W_i of length sigma(i+1) - sigma(i) + 1 from z_i to z_{i+1}.
/// Landmark x_i sits on W_i at distance 1 from z_{i+1} (the construction asks
/// for 1/2; rounded up to one resolution step, recorded).
inline MarkedSpace make_log_space(const FunctionSpec& rho, Length A, std::size_t n) {
    if (n < 2) throw Error(errc::invalid_params, "log_space needs n >= 2");
    AbelData abel = sigma_sequence(rho, A, n + 1);
    SpaceMeta meta;
    meta.family = "log_space";
    meta.params = {{"A", A}, {"n", double(n)}};
    meta.fn_params = {{"rho", rho.name()}};
    std::vector<long long> s_len(n + 2);
    for (std::size_t i = 0; i <= n + 1; ++i)
        s_len[i] = detail::round_len(abel.sigma[i], "sigma_" + std::to_string(i), meta);

    std::vector<Edge> edges;
    std::size_t next_id = n + 1; // ids 0..n are the ray Y
    for (std::size_t i = 0; i + 1 <= n; ++i)
        edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1), 1.0});
    std::vector<VertexId> z(n + 1);
    std::map<std::string, VertexId> landmarks;
    for (std::size_t i = 0; i <= n; ++i) {
        z[i] = detail::append_chain(edges, next_id, static_cast<VertexId>(i),
                                    static_cast<std::size_t>(s_len[i]));
        landmarks["y" + std::to_string(i)] = static_cast<VertexId>(i);
        landmarks["z" + std::to_string(i)] = z[i];
    }
    for (std::size_t i = 0; i + 1 <= n; ++i) {
        long long w_len = s_len[i + 1] - s_len[i] + 1;
        if (w_len < 1)
            throw Error(errc::invalid_params, "log_space bridge length must be >= 1");
        std::vector<VertexId> w_verts;
        VertexId end = detail::append_chain(edges, next_id, z[i],
                                            static_cast<std::size_t>(w_len) - 1,
                                            &w_verts);
        edges.push_back({end, z[i + 1], 1.0});
        // x_i: one step back from z_{i+1} along W_i.
        landmarks["x" + std::to_string(i)] = w_verts.empty() ? z[i] : w_verts.back();
    }
    meta.rounding_log.emplace_back("x_offset", 0.5); // 1/2 rounded to 1
    MarkedSpace s{MetricGraph(next_id, edges), {}, std::nullopt,
                  std::move(landmarks), std::move(meta)};
    for (std::size_t i = 0; i <= n; ++i) s.Y.push_back(static_cast<VertexId>(i));
    s.gamma = s.graph.make_path(s.Y);
    detail::finish_meta(s);
    return s;
}

namespace detail {

/// Shared chain-of-beads builder. Bead i has length bead_len(i) lying on Y
/// and a bridge of length bridge_len(i) attached at its endpoints; beads are
/// separated by unit gaps. Landmarks: x_i = bridge midpoint, y_i = bead
/// center.
template <typename BeadLen, typename BridgeLen>
MarkedSpace make_bead_chain(const std::string& family, std::size_t i_min,
                            std::size_t i_max, BeadLen bead_len,
                            BridgeLen bridge_len, SpaceMeta meta) {
    if (i_min > i_max)
        throw Error(errc::invalid_params, family + " needs i_min <= i_max");
    std::vector<Edge> edges;
    std::vector<VertexId> yline{0};
    std::size_t next_id = 1;
    std::map<std::string, VertexId> landmarks;
    std::vector<std::pair<VertexId, VertexId>> bead_ends;
    VertexId cur = 0;
    for (std::size_t i = i_min; i <= i_max; ++i) {
        std::size_t bl = bead_len(i);
        VertexId left = cur;
        std::vector<VertexId> bead_verts;
        cur = append_chain(edges, next_id, cur, bl, &bead_verts);
        for (VertexId v : bead_verts) yline.push_back(v);
        bead_ends.emplace_back(left, cur);
        // Bead center: floor(bl/2) steps from the left attachment.
        landmarks["y" + std::to_string(i)] =
            (bl / 2 == 0) ? left : bead_verts[bl / 2 - 1];
        if (i < i_max) {
            cur = append_chain(edges, next_id, cur, 1, &yline); // unit gap
        }
    }
    // Bridges hang off after the whole line so Y keeps a contiguous id block.
    std::size_t idx = 0;
    for (std::size_t i = i_min; i <= i_max; ++i, ++idx) {
        std::size_t jl = bridge_len(i);
        auto [left, right] = bead_ends[idx];
        std::vector<VertexId> bridge_verts;
        VertexId end = append_chain(edges, next_id, left, jl - 1, &bridge_verts);
        edges.push_back({end, right, 1.0});
        landmarks["x" + std::to_string(i)] =
            bridge_verts.empty() ? left : bridge_verts[jl / 2 - 1];
    }
    MarkedSpace s{MetricGraph(next_id, edges), std::move(yline), std::nullopt,
                  std::move(landmarks), std::move(meta)};
    s.gamma = s.graph.make_path(s.Y);
    finish_meta(s);
    return s;
}

} // namespace detail

/// Chain of beads I_i of length round(rho2(i)) bridged by J_i of length 4i.
/// Requires 0 < round(rho2(i)) < i, hence i_min >= 2.
inline MarkedSpace make_necklace(const FunctionSpec& rho2, std::size_t i_min,
                                 std::size_t i_max) {
    if (i_min < 2)
        throw Error(errc::invalid_params, "necklace needs i_min >= 2");
    SpaceMeta meta;
    meta.family = "necklace";
    meta.params = {{"i_min", double(i_min)}, {"i_max", double(i_max)}};
    meta.fn_params = {{"rho2", rho2.name()}};
    std::vector<std::size_t> bead(i_max + 1);
    for (std::size_t i = i_min; i <= i_max; ++i) {
        long long b = detail::round_len(rho2(double(i)), "I_" + std::to_string(i), meta);
        if (b < 1 || b >= static_cast<long long>(i))
            throw Error(errc::invalid_params,
                        "necklace needs 0 < round(rho2(i)) < i at i=" + std::to_string(i));
        bead[i] = static_cast<std::size_t>(b);
    }
    return detail::make_bead_chain(
        "necklace", i_min, i_max, [&](std::size_t i) { return bead[i]; },
        [](std::size_t i) { return 4 * i; }, std::move(meta));
}

/// Divergence variant: beads I_i of length 2i, bridges J_i of length
/// max(round(f(i)), 2i). The clamp keeps Y geodesic when f dips below the
/// bead length at small i; clamped indices are recorded in the rounding log.
inline MarkedSpace make_divergence_necklace(const FunctionSpec& f, std::size_t i_min,
                                            std::size_t i_max) {
    if (i_min < 1)
        throw Error(errc::invalid_params, "divergence_necklace needs i_min >= 1");
    SpaceMeta meta;
    meta.family = "divergence_necklace";
    meta.params = {{"i_min", double(i_min)}, {"i_max", double(i_max)}};
    meta.fn_params = {{"f", f.name()}};
    std::vector<std::size_t> bridge(i_max + 1);
    for (std::size_t i = i_min; i <= i_max; ++i) {
        long long b = detail::round_len(f(double(i)), "J_" + std::to_string(i), meta);
        if (b < static_cast<long long>(2 * i)) {
            meta.rounding_log.emplace_back("J_clamp_" + std::to_string(i),
                                           double(2 * i) - double(b));
            b = static_cast<long long>(2 * i);
        }
        bridge[i] = static_cast<std::size_t>(b);
    }
    return detail::make_bead_chain(
        "divergence_necklace", i_min, i_max,
        [](std::size_t i) { return 2 * i; },
        [&](std::size_t i) { return bridge[i]; }, std::move(meta));
}

/// Discretized upper half-plane: integer points (i,j) with |i| <= extent and
/// 1 <= j <= extent; horizontal and vertical edges weighted 1/j (weight taken
/// at the lower endpoint). Y = the vertical line i = 0.
inline MarkedSpace make_halfplane(std::size_t extent) {
    if (extent < 2)
        throw Error(errc::invalid_params, "halfplane needs extent >= 2");
    long long E = static_cast<long long>(extent);
    std::size_t cols = 2 * extent + 1;
    auto id = [&](long long i, long long j) {
        return static_cast<VertexId>((j - 1) * static_cast<long long>(cols) + (i + E));
    };
    std::vector<Edge> edges;
    for (long long j = 1; j <= E; ++j)
        for (long long i = -E; i <= E; ++i) {
            double w = 1.0 / static_cast<double>(j);
            if (i < E) edges.push_back({id(i, j), id(i + 1, j), w});
            if (j < E) edges.push_back({id(i, j), id(i, j + 1), w});
        }
    MarkedSpace s{MetricGraph(cols * extent, edges), {}, std::nullopt, {}, {}};
    for (long long j = 1; j <= E; ++j) s.Y.push_back(id(0, j));
    s.gamma = s.graph.make_path(s.Y);
    s.landmarks["base"] = id(0, 1);
    s.landmarks["top"] = id(0, E);
    s.landmarks["corner"] = id(E, 1);
    s.meta.family = "halfplane";
    s.meta.params = {{"extent", double(extent)}};
    detail::finish_meta(s);
    return s;
}

/// Y perturbation used by robustness tests: keep every `stride`-th vertex of
/// Y (plus the last), staying within Hausdorff distance stride/2 * (max Y
/// edge weight) of the original.
inline PointSet subsample_point_set(const PointSet& Y, std::size_t stride) {
    if (stride == 0) throw Error(errc::invalid_params, "stride must be positive");
    PointSet out;
    for (std::size_t k = 0; k < Y.size(); k += stride) out.push_back(Y[k]);
    if (out.back() != Y.back()) out.push_back(Y.back());
    return out;
}

} // namespace metricgeo
