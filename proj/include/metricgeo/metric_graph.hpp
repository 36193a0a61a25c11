#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "metricgeo/errors.hpp"

namespace metricgeo {

using VertexId = std::uint32_t;
using Length = double;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr Length kInfLength = std::numeric_limits<Length>::infinity();

struct Edge {
    VertexId u;
    VertexId v;
    Length w;
};

/// Ordered set of vertices used as a subspace (projection target, forbidden
/// region, ...). Order is meaningful for marked paths; membership queries go
/// through a bitmap built on demand by the callers that need one.
using PointSet = std::vector<VertexId>;

/// Edge path with cumulative arc length. cum[0] == 0 and
/// cum[i+1]-cum[i] is the weight of the traversed edge.
struct ParamPath {
    std::vector<VertexId> points;
    std::vector<Length> cum;

    Length length() const { return cum.empty() ? 0.0 : cum.back(); }
    bool empty() const { return points.empty(); }
    std::size_t size() const { return points.size(); }
};

struct QGParams {
    double L = 1.0;  // >= 1
    double A = 0.0;  // >= 0
};

struct ShortestPathTree {
    VertexId source = kNoVertex;
    std::vector<Length> dist;   // kInfLength where unreached
    std::vector<VertexId> pred; // kNoVertex at source / unreached
};

struct DijkstraOptions {
    Length radius_limit = kInfLength;        // stop expanding past this distance
    VertexId target = kNoVertex;             // early exit once target settles
    const std::vector<char>* forbidden = nullptr; // vertices removed from the graph
};

/// Immutable weighted graph standing in for a geodesic metric space.
/// Connected, no self loops, strictly positive finite weights. All distance
/// queries are pure; the optional per-source cache is a transparent memo.
class MetricGraph {
public:
    MetricGraph(std::size_t vertex_count, const std::vector<Edge>& edges,
                Length resolution = 1.0)
        : n_(vertex_count), resolution_(resolution) {
        if (vertex_count == 0)
            throw Error(errc::invalid_params, "graph must have at least one vertex");
        if (resolution <= 0.0)
            throw Error(errc::invalid_params, "resolution must be positive");
        std::vector<std::uint32_t> degree(n_, 0);
        for (const Edge& e : edges) {
            if (e.u >= n_ || e.v >= n_)
                throw Error(errc::invalid_params, "edge endpoint out of range");
            if (e.u == e.v)
                throw Error(errc::invalid_params, "self loops are not allowed");
            if (!(e.w > 0.0) || !std::isfinite(e.w))
                throw Error(errc::invalid_params, "edge weights must be positive and finite");
            ++degree[e.u];
            ++degree[e.v];
        }
        offsets_.assign(n_ + 1, 0);
        for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
        targets_.resize(offsets_[n_]);
        weights_.resize(offsets_[n_]);
        std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (const Edge& e : edges) {
            targets_[cursor[e.u]] = e.v;
            weights_[cursor[e.u]++] = e.w;
            targets_[cursor[e.v]] = e.u;
            weights_[cursor[e.v]++] = e.w;
        }
        // Sort each adjacency row by target id so traversal order, and with it
        // every tie-break, is independent of input edge order.
        for (std::size_t v = 0; v < n_; ++v) {
            std::vector<std::pair<VertexId, Length>> row;
            row.reserve(offsets_[v + 1] - offsets_[v]);
            for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i)
                row.emplace_back(targets_[i], weights_[i]);
            std::sort(row.begin(), row.end());
            for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i) {
                targets_[i] = row[i - offsets_[v]].first;
                weights_[i] = row[i - offsets_[v]].second;
            }
        }
        if (!is_connected())
            throw Error(errc::invalid_params, "graph must be connected");
    }

    std::size_t vertex_count() const { return n_; }
    Length resolution() const { return resolution_; }

    std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

    template <typename F>
    void for_each_neighbor(VertexId v, F&& f) const {
        for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i)
            f(targets_[i], weights_[i]);
    }

    /// Weight of the edge {u,v}; throws if absent.
    Length edge_weight(VertexId u, VertexId v) const {
        for (std::size_t i = offsets_[u]; i < offsets_[u + 1]; ++i)
            if (targets_[i] == v) return weights_[i];
        throw Error(errc::invalid_params, "no such edge");
    }

    /// Single-source shortest paths with the deterministic tie-break: among
    /// equal-length predecessors the smallest vertex id wins.
    ShortestPathTree shortest_paths(VertexId source,
                                    const DijkstraOptions& opts = {}) const {
        check_vertex(source);
        ShortestPathTree t;
        t.source = source;
        t.dist.assign(n_, kInfLength);
        t.pred.assign(n_, kNoVertex);
        if (opts.forbidden && (*opts.forbidden)[source]) return t;
        using Item = std::pair<Length, VertexId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        t.dist[source] = 0.0;
        pq.emplace(0.0, source);
        std::vector<char> done(n_, 0);
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (done[u]) continue;
            done[u] = 1;
            if (u == opts.target) break;
            if (d > opts.radius_limit) break;
            for (std::size_t i = offsets_[u]; i < offsets_[u + 1]; ++i) {
                VertexId v = targets_[i];
                if (opts.forbidden && (*opts.forbidden)[v]) continue;
                Length nd = d + weights_[i];
                if (nd < t.dist[v]) {
                    t.dist[v] = nd;
                    t.pred[v] = u;
                    pq.emplace(nd, v);
                } else if (nd == t.dist[v] && u < t.pred[v]) {
                    t.pred[v] = u;
                }
            }
        }
        if (std::isfinite(opts.radius_limit)) {
            // Vertices discovered but past the radius keep dist for callers
            // that only use values <= radius_limit; clip the rest.
            for (std::size_t v = 0; v < n_; ++v)
                if (t.dist[v] > opts.radius_limit) t.dist[v] = kInfLength;
        }
        return t;
    }

    /// Multi-source distance field d(v, S).
    std::vector<Length> distance_field(const PointSet& sources,
                                       const std::vector<char>* forbidden = nullptr) const {
        if (sources.empty())
            throw Error(errc::invalid_subspace, "distance field needs a non-empty source set");
        std::vector<Length> dist(n_, kInfLength);
        using Item = std::pair<Length, VertexId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        for (VertexId s : sources) {
            check_vertex(s);
            if (forbidden && (*forbidden)[s]) continue;
            dist[s] = 0.0;
            pq.emplace(0.0, s);
        }
        std::vector<char> done(n_, 0);
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (done[u]) continue;
            done[u] = 1;
            for (std::size_t i = offsets_[u]; i < offsets_[u + 1]; ++i) {
                VertexId v = targets_[i];
                if (forbidden && (*forbidden)[v]) continue;
                Length nd = d + weights_[i];
                if (nd < dist[v]) {
                    dist[v] = nd;
                    pq.emplace(nd, v);
                }
            }
        }
        return dist;
    }

    Length distance(VertexId x, VertexId y) const {
        check_vertex(x);
        check_vertex(y);
        if (x == y) return 0.0;
        if (auto cached = cache_lookup(x)) return (*cached)[y];
        DijkstraOptions opts;
        opts.target = y;
        return shortest_paths(x, opts).dist[y];
    }

    /// Shortest path from x to y under the deterministic tie-break.
    ParamPath geodesic(VertexId x, VertexId y) const {
        check_vertex(x);
        check_vertex(y);
        ParamPath p;
        if (x == y) {
            p.points = {x};
            p.cum = {0.0};
            return p;
        }
        // Tree rooted at y: pred points one step toward y from every vertex.
        DijkstraOptions opts;
        ShortestPathTree t = shortest_paths(y, opts);
        p.points.push_back(x);
        p.cum.push_back(0.0);
        VertexId cur = x;
        while (cur != y) {
            VertexId nxt = t.pred[cur];
            p.cum.push_back(p.cum.back() + edge_weight(cur, nxt));
            p.points.push_back(nxt);
            cur = nxt;
        }
        return p;
    }

    Length distance_to_set(VertexId x, const PointSet& set) const {
        if (set.empty())
            throw Error(errc::invalid_subspace, "distance to empty subspace");
        check_vertex(x);
        std::vector<char> member(n_, 0);
        for (VertexId v : set) member[v] = 1;
        if (member[x]) return 0.0;
        // Expand from x until the first member settles.
        using Item = std::pair<Length, VertexId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        std::vector<Length> dist(n_, kInfLength);
        std::vector<char> done(n_, 0);
        dist[x] = 0.0;
        pq.emplace(0.0, x);
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (done[u]) continue;
            done[u] = 1;
            if (member[u]) return d;
            for (std::size_t i = offsets_[u]; i < offsets_[u + 1]; ++i) {
                Length nd = d + weights_[i];
                if (nd < dist[targets_[i]]) {
                    dist[targets_[i]] = nd;
                    pq.emplace(nd, targets_[i]);
                }
            }
        }
        return kInfLength; // unreachable on a connected graph
    }

    Length hausdorff_distance(const PointSet& a, const PointSet& b) const {
        if (a.empty() || b.empty())
            throw Error(errc::invalid_subspace, "Hausdorff distance of an empty subspace");
        std::vector<Length> da = distance_field(a);
        std::vector<Length> db = distance_field(b);
        Length h = 0.0;
        for (VertexId v : b) h = std::max(h, da[v]);
        for (VertexId v : a) h = std::max(h, db[v]);
        return h;
    }

    /// Shortest path between a and b in the graph with `forbidden` vertices
    /// (and their incident edges) removed; nullopt when disconnected.
    std::optional<ParamPath> avoid_shortest_path(VertexId a, VertexId b,
                                                 const PointSet& forbidden) const {
        check_vertex(a);
        check_vertex(b);
        std::vector<char> mask(n_, 0);
        for (VertexId v : forbidden) {
            check_vertex(v);
            mask[v] = 1;
        }
        if (mask[a] || mask[b])
            throw Error(errc::invalid_query, "avoid_shortest_path endpoint is forbidden");
        if (a == b) {
            ParamPath p;
            p.points = {a};
            p.cum = {0.0};
            return p;
        }
        DijkstraOptions opts;
        opts.forbidden = &mask;
        ShortestPathTree t = shortest_paths(b, opts);
        if (!std::isfinite(t.dist[a])) return std::nullopt;
        ParamPath p;
        p.points.push_back(a);
        p.cum.push_back(0.0);
        VertexId cur = a;
        while (cur != b) {
            VertexId nxt = t.pred[cur];
            p.cum.push_back(p.cum.back() + edge_weight(cur, nxt));
            p.points.push_back(nxt);
            cur = nxt;
        }
        return p;
    }

    /// True iff every pair of path vertices satisfies the (L,A) bounds:
    ///   arc(i,j)/L - A <= d(p_i, p_j) <= L*arc(i,j) + A.
    bool is_quasigeodesic(const ParamPath& p, const QGParams& q,
                          double slack = 1e-9) const {
        if (p.empty())
            throw Error(errc::invalid_params, "empty path");
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            ShortestPathTree t = shortest_paths(p.points[i]);
            for (std::size_t j = i + 1; j < p.size(); ++j) {
                Length arc = p.cum[j] - p.cum[i];
                Length d = t.dist[p.points[j]];
                if (arc / q.L - q.A > d + slack) return false;
                if (d > q.L * arc + q.A + slack) return false;
            }
        }
        return true;
    }

    /// Minimal delta such that each side of the geodesic triangle on {x,y,z}
    /// lies in the delta-neighborhood of the other two sides. Sides are built
    /// on the sorted vertex triple, so the result is permutation invariant.
    Length triangle_thinness(VertexId x, VertexId y, VertexId z) const {
        std::array<VertexId, 3> v{x, y, z};
        std::sort(v.begin(), v.end());
        ParamPath sides[3] = {geodesic(v[0], v[1]), geodesic(v[0], v[2]),
                              geodesic(v[1], v[2])};
        Length delta = 0.0;
        for (int s = 0; s < 3; ++s) {
            PointSet others;
            for (int t = 0; t < 3; ++t)
                if (t != s)
                    others.insert(others.end(), sides[t].points.begin(),
                                  sides[t].points.end());
            std::sort(others.begin(), others.end());
            others.erase(std::unique(others.begin(), others.end()), others.end());
            std::vector<Length> dist = distance_field(others);
            for (VertexId p : sides[s].points) delta = std::max(delta, dist[p]);
        }
        return delta;
    }

    /// Build a ParamPath from an explicit vertex sequence (consecutive
    /// vertices must be adjacent).
    ParamPath make_path(const std::vector<VertexId>& points) const {
        if (points.empty())
            throw Error(errc::invalid_params, "empty path");
        ParamPath p;
        p.points = points;
        p.cum.resize(points.size());
        p.cum[0] = 0.0;
        for (std::size_t i = 1; i < points.size(); ++i)
            p.cum[i] = p.cum[i - 1] + edge_weight(points[i - 1], points[i]);
        return p;
    }

    /// Enable a bounded per-source memo for distance(). Same answers with or
    /// without it; safe for concurrent readers.
    void enable_distance_cache(std::size_t max_sources) const {
        std::lock_guard<std::mutex> lk(cache_->mutex);
        cache_->capacity = max_sources;
    }

private:
    void check_vertex(VertexId v) const {
        if (v >= n_) throw Error(errc::invalid_query, "vertex id out of range");
    }

    bool is_connected() const {
        std::vector<char> seen(n_, 0);
        std::vector<VertexId> stack{0};
        seen[0] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            VertexId u = stack.back();
            stack.pop_back();
            for (std::size_t i = offsets_[u]; i < offsets_[u + 1]; ++i) {
                if (!seen[targets_[i]]) {
                    seen[targets_[i]] = 1;
                    ++count;
                    stack.push_back(targets_[i]);
                }
            }
        }
        return count == n_;
    }

    // Cache state lives behind a shared_ptr so the graph stays movable.
    struct CacheState {
        std::mutex mutex;
        std::size_t capacity = 0;
        std::unordered_map<VertexId, std::shared_ptr<const std::vector<Length>>> map;
        std::vector<VertexId> order; // FIFO eviction
    };

    std::shared_ptr<const std::vector<Length>> cache_lookup(VertexId source) const {
        std::lock_guard<std::mutex> lk(cache_->mutex);
        if (cache_->capacity == 0) return nullptr;
        auto it = cache_->map.find(source);
        if (it != cache_->map.end()) return it->second;
        auto dists = std::make_shared<std::vector<Length>>(
            shortest_paths(source).dist);
        if (cache_->map.size() >= cache_->capacity && !cache_->order.empty()) {
            cache_->map.erase(cache_->order.front());
            cache_->order.erase(cache_->order.begin());
        }
        cache_->map.emplace(source, dists);
        cache_->order.push_back(source);
        return dists;
    }

    std::size_t n_;
    Length resolution_;
    std::vector<std::size_t> offsets_;
    std::vector<VertexId> targets_;
    std::vector<Length> weights_;

    std::shared_ptr<CacheState> cache_ = std::make_shared<CacheState>();
};

} // namespace metricgeo
