#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include "metricgeo/asymptotics.hpp"
#include "metricgeo/errors.hpp"
#include "metricgeo/function_spec.hpp"
#include "metricgeo/metric_graph.hpp"
#include "metricgeo/parallel.hpp"
#include "metricgeo/spaces.hpp"

namespace metricgeo {

struct ProjectionParams {
    Length epsilon = 0.0;
};

struct ContractionHypothesis {
    FunctionSpec rho1;
    FunctionSpec rho2;
};

/// Sampled monotone envelope with per-sample witnesses. `value` may be
/// infinite (divergence profiles); witnesses are named vertex ids.
struct ProfileSample {
    double r = 0.0;
    double value = 0.0;
    std::map<std::string, VertexId> witness;
};

struct Profile {
    std::vector<ProfileSample> samples;
    std::map<std::string, std::string> params;
    Length valid_radius = 0.0;
};

/// Deterministic base-point selection. Exhaustive below the vertex threshold;
/// otherwise stratified by distance-to-Y bands with a fixed seed.
struct SamplingPlan {
    enum class Mode { Auto, Exhaustive, Stratified };
    Mode mode = Mode::Auto;
    std::size_t exhaustive_threshold = 5000;
    std::size_t budget = 4000;
    std::size_t big_budget = 600; // used above big_threshold vertices
    std::size_t big_threshold = 100000;
    std::size_t per_band_min = 2;
    std::uint64_t seed = 12345;

    bool exhaustive_for(std::size_t vertex_count) const {
        if (mode == Mode::Exhaustive) return true;
        if (mode == Mode::Stratified) return false;
        return vertex_count <= exhaustive_threshold;
    }
    std::size_t budget_for(std::size_t vertex_count) const {
        return vertex_count > big_threshold ? big_budget : budget;
    }
    std::string describe(std::size_t vertex_count) const {
        if (exhaustive_for(vertex_count)) return "exhaustive";
        return "stratified budget=" + std::to_string(budget_for(vertex_count)) +
               " seed=" + std::to_string(seed);
    }
};

/// Precomputed epsilon-projections for every vertex: d(v,Y), the projection
/// set pi(v), and ambient distances within Y. Projections come from a
/// multi-label Dijkstra seeded on Y with the prune d(v,y) <= d(v,Y) + eps,
/// which is safe: any label useful downstream already satisfies the prune
/// bound here.
class ProjectionTable {
public:
    ProjectionTable(const MarkedSpace& s, Length eps)
        : graph_(&s.graph), eps_(eps) {
        if (s.Y.empty())
            throw Error(errc::invalid_subspace, "Y must be non-empty");
        if (eps < 0.0)
            throw Error(errc::invalid_params, "epsilon must be >= 0");
        std::size_t n = graph_->vertex_count();
        dY_ = graph_->distance_field(s.Y);
        ypos_.assign(n, -1.0);
        setup_positions(s);
        compute_labels(s);
    }

    Length eps() const { return eps_; }
    const std::vector<Length>& dist_to_Y() const { return dY_; }
    Length dist_to_Y(VertexId v) const { return dY_[v]; }
    const PointSet& proj(VertexId v) const { return proj_[v]; }

    /// Ambient distance between two Y vertices.
    Length ydist(VertexId a, VertexId b) const {
        if (span_mode_) return std::abs(ypos_[a] - ypos_[b]);
        return ymatrix_[yrow(a)][yrow(b)];
    }

    /// Ambient diameter of pi(x) union pi(y), with the realizing pair.
    Length union_diam(VertexId x, VertexId y, VertexId* out_p = nullptr,
                      VertexId* out_q = nullptr) const {
        if (span_mode_) {
            double lo = std::min(pmin_[x], pmin_[y]);
            double hi = std::max(pmax_[x], pmax_[y]);
            if (out_p || out_q) {
                VertexId p = kNoVertex, q = kNoVertex;
                for (VertexId v : {x, y}) {
                    for (VertexId w : proj_[v]) {
                        if (ypos_[w] == lo && (p == kNoVertex || w < p)) p = w;
                        if (ypos_[w] == hi && (q == kNoVertex || w < q)) q = w;
                    }
                }
                if (out_p) *out_p = p;
                if (out_q) *out_q = q;
            }
            return hi - lo;
        }
        PointSet u = proj_[x];
        u.insert(u.end(), proj_[y].begin(), proj_[y].end());
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        return set_diam(u, out_p, out_q);
    }

    /// Ambient diameter of a set of Y vertices.
    Length set_diam(const PointSet& ys, VertexId* out_p = nullptr,
                    VertexId* out_q = nullptr) const {
        if (ys.empty()) return 0.0;
        if (span_mode_) {
            VertexId p = ys.front(), q = ys.front();
            for (VertexId v : ys) {
                if (ypos_[v] < ypos_[p]) p = v;
                if (ypos_[v] > ypos_[q]) q = v;
            }
            if (out_p) *out_p = p;
            if (out_q) *out_q = q;
            return ypos_[q] - ypos_[p];
        }
        Length best = 0.0;
        VertexId bp = ys.front(), bq = ys.front();
        for (std::size_t i = 0; i < ys.size(); ++i)
            for (std::size_t j = i + 1; j < ys.size(); ++j) {
                Length d = ymatrix_[yrow(ys[i])][yrow(ys[j])];
                if (d > best) {
                    best = d;
                    bp = ys[i];
                    bq = ys[j];
                }
            }
        if (out_p) *out_p = bp;
        if (out_q) *out_q = bq;
        return best;
    }

    /// Y-position accessors, valid in span mode (monotone along gamma).
    bool span_mode() const { return span_mode_; }
    double pos_min(VertexId v) const { return pmin_[v]; }
    double pos_max(VertexId v) const { return pmax_[v]; }

private:
    static constexpr std::size_t kMatrixLimit = 1024;

    std::size_t yrow(VertexId v) const {
        return static_cast<std::size_t>(yindex_[v]);
    }

    void setup_positions(const MarkedSpace& s) {
        std::size_t n = graph_->vertex_count();
        yindex_.assign(n, -1);
        for (std::size_t k = 0; k < s.Y.size(); ++k)
            yindex_[s.Y[k]] = static_cast<std::int64_t>(k);
        // Span mode: Y is traversed by gamma and is isometrically embedded
        // (validated on sampled pairs). Then ambient distance within Y equals
        // the arc-length gap and diameters reduce to position spans.
        span_mode_ = false;
        if (s.gamma && s.gamma->points.size() == s.Y.size()) {
            bool matches = true;
            for (std::size_t k = 0; k < s.Y.size(); ++k)
                if (s.gamma->points[k] != s.Y[k]) {
                    matches = false;
                    break;
                }
            if (matches) {
                span_mode_ = true;
                std::size_t m = s.Y.size();
                std::size_t step = std::max<std::size_t>(1, m / 16);
                for (std::size_t a = 0; a < m && span_mode_; a += step) {
                    ShortestPathTree t = graph_->shortest_paths(s.Y[a]);
                    for (std::size_t b = 0; b < m; b += step) {
                        double arc = std::abs(s.gamma->cum[b] - s.gamma->cum[a]);
                        if (std::abs(t.dist[s.Y[b]] - arc) > 1e-9) {
                            span_mode_ = false;
                            break;
                        }
                    }
                }
                if (span_mode_)
                    for (std::size_t k = 0; k < m; ++k)
                        ypos_[s.Y[k]] = s.gamma->cum[k];
            }
        }
        if (!span_mode_) {
            if (s.Y.size() > kMatrixLimit)
                throw Error(errc::invalid_subspace,
                            "Y too large for pairwise distances and not a "
                            "validated isometric path");
            ymatrix_.resize(s.Y.size());
            for (std::size_t k = 0; k < s.Y.size(); ++k) {
                ShortestPathTree t = graph_->shortest_paths(s.Y[k]);
                ymatrix_[k].resize(s.Y.size());
                for (std::size_t j = 0; j < s.Y.size(); ++j)
                    ymatrix_[k][j] = t.dist[s.Y[j]];
            }
        }
    }

    void compute_labels(const MarkedSpace& s) {
        std::size_t n = graph_->vertex_count();
        std::vector<std::vector<std::pair<VertexId, Length>>> labs(n);
        using Item = std::tuple<Length, VertexId, VertexId>; // (d, v, y)
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        for (VertexId y : s.Y) pq.emplace(0.0, y, y);
        const double tol = 1e-12;
        while (!pq.empty()) {
            auto [d, v, y] = pq.top();
            pq.pop();
            if (d > dY_[v] + eps_ + tol) continue;
            bool seen = false;
            for (auto& [ly, ld] : labs[v])
                if (ly == y) {
                    seen = true;
                    break;
                }
            if (seen) continue;
            labs[v].emplace_back(y, d);
            graph_->for_each_neighbor(v, [&](VertexId w, Length wt) {
                Length nd = d + wt;
                if (nd <= dY_[w] + eps_ + tol) pq.emplace(nd, w, y);
            });
        }
        proj_.resize(n);
        pmin_.assign(n, 0.0);
        pmax_.assign(n, 0.0);
        for (std::size_t v = 0; v < n; ++v) {
            auto& ls = labs[v];
            proj_[v].reserve(ls.size());
            for (auto& [y, d] : ls) proj_[v].push_back(y);
            std::sort(proj_[v].begin(), proj_[v].end());
            if (proj_[v].empty())
                throw Error(errc::invalid_subspace, "empty projection set");
            if (span_mode_) {
                double lo = ypos_[proj_[v].front()], hi = lo;
                for (VertexId y : proj_[v]) {
                    lo = std::min(lo, ypos_[y]);
                    hi = std::max(hi, ypos_[y]);
                }
                pmin_[v] = lo;
                pmax_[v] = hi;
            }
        }
    }

    const MetricGraph* graph_;
    Length eps_;
    std::vector<Length> dY_;
    std::vector<PointSet> proj_;
    std::vector<std::int64_t> yindex_;
    bool span_mode_ = false;
    std::vector<double> ypos_, pmin_, pmax_;
    std::vector<std::vector<Length>> ymatrix_;
};

/// One-off epsilon-projection of a single point (no table construction).
inline PointSet project(const MarkedSpace& s, VertexId x, const ProjectionParams& p) {
    if (s.Y.empty()) throw Error(errc::invalid_subspace, "Y must be non-empty");
    Length dxY = s.graph.distance_to_set(x, s.Y);
    DijkstraOptions opts;
    opts.radius_limit = dxY + p.epsilon;
    ShortestPathTree t = s.graph.shortest_paths(x, opts);
    PointSet out;
    for (VertexId y : s.Y)
        if (t.dist[y] <= dxY + p.epsilon + 1e-12) out.push_back(y);
    std::sort(out.begin(), out.end());
    return out;
}

/// diam(pi(x) union pi(y)) in the ambient metric, one-off.
inline Length pair_projection_diameter(const MarkedSpace& s, VertexId x, VertexId y,
                                       const ProjectionParams& p) {
    PointSet u = project(s, x, p);
    PointSet v = project(s, y, p);
    u.insert(u.end(), v.begin(), v.end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    Length best = 0.0;
    for (VertexId a : u) {
        ShortestPathTree t = s.graph.shortest_paths(a);
        for (VertexId b : u) best = std::max(best, t.dist[b]);
    }
    return best;
}

namespace detail {

/// Deterministic stratified base-point pool: every vertex with d(v,Y) <=
/// r_max when exhaustive; otherwise per-band lowest ids plus a seeded strided
/// slice, plus every admissible landmark (they carry the constructions'
/// witnesses).
inline std::vector<VertexId> select_base_points(const MarkedSpace& s,
                                                const std::vector<Length>& dY,
                                                double r_max,
                                                const SamplingPlan& plan) {
    std::size_t n = s.graph.vertex_count();
    std::vector<VertexId> out;
    if (plan.exhaustive_for(n)) {
        for (VertexId v = 0; v < n; ++v)
            if (dY[v] <= r_max) out.push_back(v);
        return out;
    }
    std::size_t nbands;
    bool unit_bands = r_max <= 256.0;
    nbands = unit_bands ? static_cast<std::size_t>(std::floor(r_max)) + 1 : 256;
    double logmax = std::log1p(r_max);
    auto band_of = [&](Length d) {
        if (unit_bands)
            return std::min(nbands - 1, static_cast<std::size_t>(std::floor(d)));
        if (d <= 0.0) return std::size_t{0};
        return std::min(nbands - 1, static_cast<std::size_t>(
                                        std::floor(nbands * std::log1p(d) / logmax)));
    };
    std::vector<std::vector<VertexId>> bands(nbands);
    for (VertexId v = 0; v < n; ++v)
        if (dY[v] <= r_max) bands[band_of(dY[v])].push_back(v); // ids ascending
    std::size_t budget = plan.budget_for(n);
    std::size_t quota = std::max(plan.per_band_min, budget / nbands);
    for (auto& band : bands) {
        if (band.empty()) continue;
        std::size_t low = std::min(band.size(), quota / 2 + 1);
        for (std::size_t k = 0; k < low; ++k) out.push_back(band[k]);
        std::size_t rest = quota > low ? quota - low : 0;
        if (rest > 0 && band.size() > low) {
            std::size_t stride = std::max<std::size_t>(1, band.size() / rest);
            for (std::size_t k = plan.seed % stride; k < band.size(); k += stride)
                out.push_back(band[k]);
        }
    }
    for (auto& [name, v] : s.landmarks)
        if (dY[v] <= r_max) out.push_back(v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct BasePointResult {
    VertexId x = kNoVertex;
    VertexId partner = kNoVertex;
    Length dxY = 0.0;
    Length diam = -1.0;
};

} // namespace detail

/// Optimal contraction data: value(r) = max over pairs with d(x,x') <=
/// rho1(d(x,Y)) and d(x,Y) <= r of diam(pi(x) union pi(x')). Witness names:
/// x, y (the pair), p, q (the Y points realizing the diameter).
inline Profile contraction_profile(const MarkedSpace& s, const ProjectionParams& p,
                                   const FunctionSpec& rho1,
                                   const std::vector<double>& r_grid,
                                   const SamplingPlan& plan = {}, unsigned jobs = 1,
                                   const ProjectionTable* shared_table = nullptr) {
    if (r_grid.empty())
        throw Error(errc::invalid_params, "empty radius grid");
    for (std::size_t i = 1; i < r_grid.size(); ++i)
        if (!(r_grid[i] > r_grid[i - 1]))
            throw Error(errc::invalid_params, "radius grid must increase");
    if (r_grid.back() > s.meta.valid_radius + 1e-9)
        throw Error(errc::window_violation,
                    "radius grid exceeds the space's valid radius");
    std::optional<ProjectionTable> local_table;
    if (!shared_table) local_table.emplace(s, p.epsilon);
    const ProjectionTable& table = shared_table ? *shared_table : *local_table;
    const std::vector<Length>& dY = table.dist_to_Y();
    double r_max = r_grid.back();
    std::vector<VertexId> base = detail::select_base_points(s, dY, r_max, plan);

    using Results = std::vector<detail::BasePointResult>;
    Results per_x = parallel_chunked<Results>(
        base.size(), Results{},
        [&](std::size_t lo, std::size_t hi) {
            Results out;
            out.reserve(hi - lo);
            for (std::size_t k = lo; k < hi; ++k) {
                VertexId x = base[k];
                detail::BasePointResult res;
                res.x = x;
                res.dxY = dY[x];
                double radius = std::max(0.0, rho1(dY[x]));
                DijkstraOptions opts;
                opts.radius_limit = radius;
                ShortestPathTree t = s.graph.shortest_paths(x, opts);
                for (VertexId v = 0; v < s.graph.vertex_count(); ++v) {
                    if (!(t.dist[v] <= radius)) continue;
                    Length d = table.union_diam(x, v);
                    if (d > res.diam) {
                        res.diam = d;
                        res.partner = v;
                    }
                }
                out.push_back(res);
            }
            return out;
        },
        [](Results& acc, const Results& part) {
            acc.insert(acc.end(), part.begin(), part.end());
        },
        jobs);

    std::sort(per_x.begin(), per_x.end(),
              [](const detail::BasePointResult& a, const detail::BasePointResult& b) {
                  return std::tie(a.dxY, a.x) < std::tie(b.dxY, b.x);
              });

    Profile prof;
    prof.valid_radius = s.meta.valid_radius;
    prof.params["kind"] = "contraction";
    prof.params["rho1"] = rho1.name();
    prof.params["epsilon"] = std::to_string(p.epsilon);
    prof.params["sampling"] = plan.describe(s.graph.vertex_count());
    std::size_t idx = 0;
    Length best = 0.0;
    VertexId bx = kNoVertex, bpart = kNoVertex;
    for (double r : r_grid) {
        while (idx < per_x.size() && per_x[idx].dxY <= r + 1e-12) {
            if (per_x[idx].diam > best) {
                best = per_x[idx].diam;
                bx = per_x[idx].x;
                bpart = per_x[idx].partner;
            }
            ++idx;
        }
        ProfileSample sample;
        sample.r = r;
        sample.value = best;
        if (bx != kNoVertex) {
            VertexId wp = kNoVertex, wq = kNoVertex;
            table.union_diam(bx, bpart, &wp, &wq);
            sample.witness = {{"x", bx}, {"y", bpart}, {"p", wp}, {"q", wq}};
        }
        prof.samples.push_back(std::move(sample));
    }
    return prof;
}

struct ContractionViolation {
    double r = 0.0;
    double value = 0.0;
    double bound = 0.0;
    std::map<std::string, VertexId> witness;
};

struct ContractionCheck {
    bool ok = false;
    WindowVerdict ratio_verdict = WindowVerdict::Inconclusive;
    std::vector<ContractionViolation> violations;
};

/// value(r) <= rho2(r) at every sample, plus the declared tail rule for
/// rho2/rho1 -> 0 (top-half mean below half the bottom-half mean, or zero).
inline ContractionCheck check_contracting(const Profile& profile,
                                          const ContractionHypothesis& h,
                                          double tol = 1e-9) {
    auto it = profile.params.find("rho1");
    if (it == profile.params.end() || it->second != h.rho1.name())
        throw Error(errc::invalid_comparison,
                    "profile was computed with a different rho1");
    ContractionCheck out;
    for (const ProfileSample& s : profile.samples) {
        double bound = h.rho2(s.r);
        if (s.value > bound + tol)
            out.violations.push_back({s.r, s.value, bound, s.witness});
    }
    std::vector<double> ratios;
    for (const ProfileSample& s : profile.samples) {
        double r1 = h.rho1(s.r);
        if (r1 > 0.0) ratios.push_back(h.rho2(s.r) / r1);
    }
    if (ratios.size() >= 2) {
        std::size_t mid = ratios.size() / 2;
        double head = 0.0, tail = 0.0;
        for (std::size_t i = 0; i < mid; ++i) head += ratios[i];
        for (std::size_t i = mid; i < ratios.size(); ++i) tail += ratios[i];
        head /= static_cast<double>(mid);
        tail /= static_cast<double>(ratios.size() - mid);
        if (tail <= tol)
            out.ratio_verdict = WindowVerdict::SublinearOnWindow;
        else
            out.ratio_verdict = tail < 0.5 * head
                                    ? WindowVerdict::SublinearOnWindow
                                    : WindowVerdict::NotSublinearOnWindow;
    }
    out.ok = out.violations.empty() &&
             out.ratio_verdict == WindowVerdict::SublinearOnWindow;
    return out;
}

/// Per-segment projection statistics for geodesics staying C away from Y.
struct GeoImageSample {
    VertexId x = kNoVertex, y = kNoVertex;
    Length diam_proj = 0.0;
    Length max_endpoint_dist = 0.0;
    Length max_interior_dist = 0.0;
};

struct GeoImageProfile {
    std::vector<GeoImageSample> samples;
    std::size_t skipped = 0; // candidate segments that dipped below C
    Length C = 0.0;
};

inline GeoImageProfile geodesic_image_profile(const MarkedSpace& s,
                                              const ProjectionParams& p, Length C,
                                              const SamplingPlan& plan = {},
                                              unsigned jobs = 1,
                                              const ProjectionTable* shared_table = nullptr) {
    if (C < 0.0) throw Error(errc::invalid_params, "C must be >= 0");
    std::optional<ProjectionTable> local_table;
    if (!shared_table) local_table.emplace(s, p.epsilon);
    const ProjectionTable& table = shared_table ? *shared_table : *local_table;
    const std::vector<Length>& dY = table.dist_to_Y();
    std::vector<VertexId> pool =
        detail::select_base_points(s, dY, s.meta.valid_radius, plan);
    std::vector<VertexId> cand;
    for (VertexId v : pool)
        if (dY[v] >= C && !(dY[v] > 0 && table.proj(v).empty())) cand.push_back(v);
    std::vector<std::pair<VertexId, VertexId>> pairs;
    std::size_t limit = 128;
    for (std::size_t k = 0; k + 1 < cand.size() && pairs.size() < limit; k += 2)
        pairs.emplace_back(cand[k], cand[k + 1]);
    std::size_t half = cand.size() / 2;
    for (std::size_t k = 0; k + half < cand.size() && pairs.size() < 2 * limit; k += 4)
        pairs.emplace_back(cand[k], cand[k + half]);

    GeoImageProfile out;
    out.C = C;
    struct Acc {
        std::vector<GeoImageSample> samples;
        std::size_t skipped = 0;
    };
    Acc acc = parallel_chunked<Acc>(
        pairs.size(), Acc{},
        [&](std::size_t lo, std::size_t hi) {
            Acc part;
            for (std::size_t k = lo; k < hi; ++k) {
                auto [x, y] = pairs[k];
                if (x == y) continue;
                ParamPath geo = s.graph.geodesic(x, y);
                Length min_d = kInfLength, max_d = 0.0;
                for (VertexId v : geo.points) {
                    min_d = std::min(min_d, dY[v]);
                    max_d = std::max(max_d, dY[v]);
                }
                if (min_d < C) {
                    ++part.skipped;
                    continue;
                }
                GeoImageSample g;
                g.x = x;
                g.y = y;
                g.max_endpoint_dist = std::max(dY[x], dY[y]);
                g.max_interior_dist = max_d;
                if (table.span_mode()) {
                    double lo_p = table.pos_min(geo.points.front());
                    double hi_p = table.pos_max(geo.points.front());
                    for (VertexId v : geo.points) {
                        lo_p = std::min(lo_p, table.pos_min(v));
                        hi_p = std::max(hi_p, table.pos_max(v));
                    }
                    g.diam_proj = hi_p - lo_p;
                } else {
                    PointSet u;
                    for (VertexId v : geo.points)
                        u.insert(u.end(), table.proj(v).begin(), table.proj(v).end());
                    std::sort(u.begin(), u.end());
                    u.erase(std::unique(u.begin(), u.end()), u.end());
                    g.diam_proj = table.set_diam(u);
                }
                part.samples.push_back(g);
            }
            return part;
        },
        [](Acc& a, const Acc& b) {
            a.samples.insert(a.samples.end(), b.samples.begin(), b.samples.end());
            a.skipped += b.skipped;
        },
        jobs);
    out.samples = std::move(acc.samples);
    out.skipped = acc.skipped;
    return out;
}

/// diam of pi(Y'), Y' disjoint from Y.
inline Length subspace_projection_diameter(const MarkedSpace& s, const PointSet& y_prime,
                                           const ProjectionParams& p,
                                           const ProjectionTable* shared_table = nullptr) {
    if (y_prime.empty())
        throw Error(errc::invalid_subspace, "Y' must be non-empty");
    std::vector<char> mask = s.y_mask();
    for (VertexId v : y_prime)
        if (mask[v])
            throw Error(errc::invalid_query, "Y' must be disjoint from Y");
    std::optional<ProjectionTable> local_table;
    if (!shared_table) local_table.emplace(s, p.epsilon);
    const ProjectionTable& table = shared_table ? *shared_table : *local_table;
    PointSet u;
    for (VertexId v : y_prime)
        u.insert(u.end(), table.proj(v).begin(), table.proj(v).end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    return table.set_diam(u);
}

/// Convenience grids for profile sweeps.
inline std::vector<double> linear_grid(double r_max, double step = 1.0) {
    std::vector<double> g;
    for (double r = step; r <= r_max + 1e-12; r += step) g.push_back(r);
    return g;
}

inline std::vector<double> geometric_grid(double r_max, double factor = 2.0,
                                          double r_min = 1.0) {
    std::vector<double> g;
    for (double r = r_min; r <= r_max + 1e-12; r *= factor) g.push_back(r);
    return g;
}

} // namespace metricgeo
