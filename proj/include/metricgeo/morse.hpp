#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "metricgeo/asymptotics.hpp"
#include "metricgeo/divergence.hpp"
#include "metricgeo/errors.hpp"
#include "metricgeo/function_spec.hpp"
#include "metricgeo/metric_graph.hpp"
#include "metricgeo/parallel.hpp"
#include "metricgeo/projection.hpp"
#include "metricgeo/spaces.hpp"

namespace metricgeo {

/// Morse gauge mu(L, A), non-decreasing in L.
struct MorseFunctionSpec {
    std::string name;
    std::function<double(double, double)> fn;

    double operator()(double L, double A = 0.0) const {
        if (!fn) throw Error(errc::invalid_function, "empty Morse gauge");
        return fn(L, A);
    }

    static MorseFunctionSpec symbolic(std::string n,
                                      std::function<double(double, double)> f) {
        return {std::move(n), std::move(f)};
    }
    /// Gauge depending on L only.
    static MorseFunctionSpec of_L(const FunctionSpec& f) {
        return {f.name(), [f](double L, double) { return f(L); }};
    }
};

/// Escape witness: a budgeted path between two Y points reaching distance B
/// from Y.
struct DetourWitness {
    VertexId y1 = kNoVertex, y2 = kNoVertex;
    double L = 1.0;
    Length B = 0.0;
    ParamPath path;
    std::optional<std::pair<double, ParamPath>> certified_qg;
};

struct DetourResult {
    Length B = 0.0;
    DetourWitness witness;
};

/// Explicit Morse-gauge report derived from a contraction hypothesis.
struct MorseBoundReport {
    Length E = 0.0;
    Length d_bound = 0.0;
    Length T = 0.0;
    Length B = 0.0;
    std::string rho1_name, rho2_name;
    Length eps = 0.0;
    double L = 1.0, A = 0.0;
};

namespace detail {

/// Path from `from` down the predecessor chain of a tree rooted at its
/// source (i.e. toward tree.source).
inline ParamPath path_from_tree(const MetricGraph& g, const ShortestPathTree& tree,
                                VertexId from) {
    ParamPath p;
    p.points.push_back(from);
    p.cum.push_back(0.0);
    VertexId cur = from;
    while (cur != tree.source) {
        VertexId nxt = tree.pred[cur];
        if (nxt == kNoVertex)
            throw Error(errc::invalid_query, "vertex unreachable in tree");
        p.cum.push_back(p.cum.back() + g.edge_weight(cur, nxt));
        p.points.push_back(nxt);
        cur = nxt;
    }
    return p;
}

inline ParamPath concat_paths(const ParamPath& a, const ParamPath& b) {
    if (a.points.back() != b.points.front())
        throw Error(errc::invalid_params, "paths do not share an endpoint");
    ParamPath out = a;
    for (std::size_t k = 1; k < b.points.size(); ++k) {
        out.points.push_back(b.points[k]);
        out.cum.push_back(a.cum.back() + b.cum[k]);
    }
    return out;
}

/// Strided lower-bound quasi-geodesic check: arc/L - A <= d on sampled index
/// pairs. The upper bound holds for every edge path automatically.
inline bool qg_lower_check(const MetricGraph& g, const ParamPath& p, double L,
                           double A, std::size_t stride) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < p.size(); i += stride) idx.push_back(i);
    if (idx.back() != p.size() - 1) idx.push_back(p.size() - 1);
    for (std::size_t a = 0; a + 1 < idx.size(); ++a) {
        ShortestPathTree t = g.shortest_paths(p.points[idx[a]]);
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            double arc = p.cum[idx[b]] - p.cum[idx[a]];
            if (arc / L - A > t.dist[p.points[idx[b]]] + 1e-9) return false;
        }
    }
    return true;
}

} // namespace detail

/// Largest certified escape height: the maximum over budget-admissible relay
/// vertices w (|y1->w->y2| <= L * d(y1,y2)) of the distance to Y reached by a
/// relay path that still verifies the (L,0) lower quasi-geodesic bound. The
/// budget alone is not enough: uncertified relay paths include out-and-back
/// spurs that a genuine quasi-geodesic cannot afford.
inline DetourResult detour_bound(const MarkedSpace& s, VertexId y1, VertexId y2,
                                 double L,
                                 const std::vector<Length>* dY_pre = nullptr,
                                 std::size_t cert_stride_cap = 32) {
    if (L < 1.0) throw Error(errc::invalid_params, "L must be >= 1");
    std::vector<char> ymask = s.y_mask();
    if (!ymask[y1] || !ymask[y2])
        throw Error(errc::invalid_query, "endpoints must lie on Y");
    std::vector<Length> dY_local;
    const std::vector<Length>* dY = dY_pre;
    if (!dY) {
        dY_local = s.graph.distance_field(s.Y);
        dY = &dY_local;
    }
    ShortestPathTree t1 = s.graph.shortest_paths(y1);
    ShortestPathTree t2 = s.graph.shortest_paths(y2);
    double budget = L * t1.dist[y2];

    std::size_t n = s.graph.vertex_count();
    std::vector<VertexId> admissible;
    for (VertexId v = 0; v < n; ++v)
        if ((*dY)[v] > 0.0 && t1.dist[v] + t2.dist[v] <= budget + 1e-9)
            admissible.push_back(v);

    std::vector<Length> heights;
    for (VertexId v : admissible) heights.push_back((*dY)[v]);
    std::sort(heights.begin(), heights.end());
    heights.erase(std::unique(heights.begin(), heights.end()), heights.end());

    auto relay_path = [&](VertexId w) {
        // y1 -> w via the tree rooted at y1 (walk from w, then reverse), then
        // w -> y2 via the tree rooted at y2.
        ParamPath back = detail::path_from_tree(s.graph, t1, w);
        ParamPath leg1;
        leg1.points.assign(back.points.rbegin(), back.points.rend());
        leg1.cum.resize(back.cum.size());
        for (std::size_t k = 0; k < back.cum.size(); ++k)
            leg1.cum[k] = back.cum.back() - back.cum[back.cum.size() - 1 - k];
        ParamPath leg2 = detail::path_from_tree(s.graph, t2, w);
        return detail::concat_paths(leg1, leg2);
    };

    // Midpoint of the base geodesic, center of the ball-avoiding candidate.
    ParamPath base = detail::path_from_tree(s.graph, t2, y1);
    VertexId mid_v = base.points.front();
    {
        double half = base.length() / 2.0;
        for (std::size_t k = 0; k < base.size(); ++k)
            if (base.cum[k] <= half) mid_v = base.points[k];
    }
    ShortestPathTree tm = s.graph.shortest_paths(mid_v);

    auto certify = [&](ParamPath p) -> std::optional<std::pair<ParamPath, Length>> {
        if (p.length() > budget + 1e-9) return std::nullopt;
        std::size_t stride = std::max<std::size_t>(1, p.size() / cert_stride_cap);
        if (!detail::qg_lower_check(s.graph, p, L, 0.0, stride)) return std::nullopt;
        Length reached = 0.0;
        for (VertexId v : p.points) reached = std::max(reached, (*dY)[v]);
        return std::make_pair(std::move(p), reached);
    };

    auto probe = [&](Length h) -> std::optional<std::pair<ParamPath, Length>> {
        // Candidate 1: cheapest relay at exactly this height, smallest id on
        // ties.
        std::optional<std::pair<ParamPath, Length>> best;
        VertexId w = kNoVertex;
        double best_cost = 0.0;
        for (VertexId v : admissible) {
            if ((*dY)[v] != h) continue;
            double cost = t1.dist[v] + t2.dist[v];
            if (w == kNoVertex || cost < best_cost ||
                (cost == best_cost && v < w)) {
                w = v;
                best_cost = cost;
            }
        }
        if (w != kNoVertex) best = certify(relay_path(w));
        // Candidate 2: route around the ball of radius h at the midpoint of
        // the base geodesic. Relay paths ascend and descend along the same
        // branch when the tie-break pushes both trees the same way, which a
        // quasi-geodesic cannot afford; the ball detour spreads the climb.
        if (h > 0.0 && tm.dist[y1] >= h && tm.dist[y2] >= h) {
            PointSet forb;
            for (VertexId v = 0; v < n; ++v)
                if (tm.dist[v] < h) forb.push_back(v);
            if (!forb.empty()) {
                auto det = s.graph.avoid_shortest_path(y1, y2, forb);
                if (det) {
                    auto cand = certify(std::move(*det));
                    if (cand && (!best || cand->second > best->second))
                        best = std::move(cand);
                }
            }
        }
        return best;
    };

    DetourResult out;
    out.witness.y1 = y1;
    out.witness.y2 = y2;
    out.witness.L = L;
    out.witness.path = detail::path_from_tree(s.graph, t2, y1);
    if (heights.empty()) return out;

    // Binary search over realized heights; keep the best certified probe in
    // case feasibility is not perfectly monotone.
    std::size_t lo = 0, hi = heights.size(); // feasible region: [0, hi)
    ParamPath best_path = out.witness.path;
    bool have = false;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        auto res = probe(heights[mid]);
        if (res && res->second > out.B) {
            out.B = res->second;
            best_path = res->first;
            have = true;
        }
        if (res)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (have) {
        out.witness.path = best_path;
        out.witness.B = out.B;
        out.witness.certified_qg = std::make_pair(L, best_path);
    }
    return out;
}

/// Detour sweep: per budget L, the certified escape height over geometrically
/// spaced endpoint separations along gamma (two base pairs per separation).
struct MorseProfileResult {
    std::vector<double> L_grid;
    std::vector<Profile> per_L;
};

inline MorseProfileResult morse_profile(const MarkedSpace& s,
                                        const std::vector<double>& L_grid,
                                        unsigned jobs = 1,
                                        double min_sep = 4.0,
                                        double sep_factor = 1.5) {
    if (L_grid.empty()) throw Error(errc::invalid_params, "empty L grid");
    if (!s.gamma) throw Error(errc::invalid_query, "space has no marked path gamma");
    const ParamPath& gamma = *s.gamma;
    double glen = gamma.length();
    std::vector<double> seps;
    for (double sep = min_sep; sep <= 0.8 * glen; sep *= sep_factor)
        seps.push_back(sep);
    if (seps.empty()) throw Error(errc::invalid_params, "gamma too short for sweep");
    std::vector<Length> dY = s.graph.distance_field(s.Y);

    struct Cell {
        std::size_t li, si, pi;
        VertexId y1, y2;
    };
    std::vector<Cell> cells;
    std::vector<double> centers = {glen / 2.0, glen / 3.0};
    for (std::size_t li = 0; li < L_grid.size(); ++li)
        for (std::size_t si = 0; si < seps.size(); ++si)
            for (std::size_t pi = 0; pi < centers.size(); ++pi) {
                double c = centers[pi], sep = seps[si];
                if (c - sep / 2.0 < 0.0 || c + sep / 2.0 > glen) continue;
                VertexId a = gamma.points[detail::gamma_index_at(gamma, c - sep / 2.0)];
                VertexId b = gamma.points[detail::gamma_index_at(gamma, c + sep / 2.0)];
                if (a == b) continue;
                cells.push_back({li, si, pi, a, b});
            }

    struct CellOut {
        std::size_t li, si;
        VertexId y1, y2;
        Length B;
        VertexId top;
    };
    using Outs = std::vector<CellOut>;
    Outs outs = parallel_chunked<Outs>(
        cells.size(), Outs{},
        [&](std::size_t lo, std::size_t hi) {
            Outs part;
            for (std::size_t k = lo; k < hi; ++k) {
                const Cell& c = cells[k];
                DetourResult r = detour_bound(s, c.y1, c.y2, L_grid[c.li], &dY);
                VertexId top = c.y1;
                for (VertexId v : r.witness.path.points)
                    if (dY[v] > dY[top]) top = v;
                part.push_back({c.li, c.si, c.y1, c.y2, r.B, top});
            }
            return part;
        },
        [](Outs& a, const Outs& b) { a.insert(a.end(), b.begin(), b.end()); },
        jobs);

    MorseProfileResult res;
    res.L_grid = L_grid;
    res.per_L.resize(L_grid.size());
    for (std::size_t li = 0; li < L_grid.size(); ++li) {
        Profile& prof = res.per_L[li];
        prof.valid_radius = s.meta.valid_radius;
        prof.params["kind"] = "morse";
        prof.params["L"] = std::to_string(L_grid[li]);
        for (std::size_t si = 0; si < seps.size(); ++si) {
            ProfileSample sample;
            sample.r = seps[si];
            sample.value = 0.0;
            bool any = false;
            for (const CellOut& o : outs) {
                if (o.li != li || o.si != si) continue;
                any = true;
                if (o.B > sample.value) {
                    sample.value = o.B;
                    sample.witness = {{"y1", o.y1}, {"y2", o.y2}, {"w", o.top}};
                }
            }
            if (any) prof.samples.push_back(std::move(sample));
        }
    }
    return res;
}

enum class MorseVerdict { MorseConsistent, NotMorse, Inconclusive };

inline const char* to_string(MorseVerdict v) {
    switch (v) {
        case MorseVerdict::MorseConsistent: return "morse-consistent";
        case MorseVerdict::NotMorse: return "not-morse";
        case MorseVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct MorseClassification {
    MorseVerdict verdict = MorseVerdict::Inconclusive;
    std::vector<FitReport> per_L;
};

/// Bounded or sublinear growth of the escape height in the separation, for
/// every budget L, is the window-consistent reading of the Morse property;
/// linear or faster growth at any L refutes it.
inline MorseClassification classify_morse(const MorseProfileResult& m) {
    MorseClassification out;
    bool all_good = true, any_bad = false;
    for (const Profile& prof : m.per_L) {
        FunctionSamples f;
        double vmax = 0.0, r_hi = 0.0;
        for (const ProfileSample& s : prof.samples) {
            f.points.emplace_back(s.r, s.value);
            vmax = std::max(vmax, s.value);
            r_hi = std::max(r_hi, s.r);
        }
        FitReport rep;
        if (!f.points.empty() && vmax <= 0.05 * r_hi) {
            // Escape heights negligible against the separations: bounded on
            // this window regardless of their small-scale wiggle.
            rep.cls = GrowthClass::Bounded;
            rep.r2 = 1.0;
            rep.window_lo = f.points.front().first;
            rep.window_hi = r_hi;
        } else if (f.points.size() >= 8) {
            rep = classify_growth(f);
        }
        if (rep.cls == GrowthClass::Linear || rep.cls == GrowthClass::Superlinear)
            any_bad = true;
        if (!(rep.cls == GrowthClass::Bounded || rep.sublinear_class()))
            all_good = false;
        out.per_L.push_back(rep);
    }
    if (any_bad)
        out.verdict = MorseVerdict::NotMorse;
    else if (all_good && !m.per_L.empty())
        out.verdict = MorseVerdict::MorseConsistent;
    return out;
}

/// Shortcut procedure: replace up to two maximal subsegments with
/// D(p,q) = L*d(p,q) - arc(p,q) <= 0 by geodesics (earliest start, then
/// latest end; the second replacement starts at or after the first one's
/// end). Preserves endpoints, never lengthens, and certifies (L,0) up to a
/// resolution unit for concatenations of up to three geodesics.
inline ParamPath shortcut_quasigeodesify(const MetricGraph& g, const ParamPath& gamma,
                                         double L, std::size_t stride = 1) {
    if (gamma.size() < 2 || gamma.points.front() == gamma.points.back())
        throw Error(errc::invalid_params, "need a path with distinct endpoints");
    Length d_ends = g.distance(gamma.points.front(), gamma.points.back());
    if (L < gamma.length() / d_ends - 1e-9)
        throw Error(errc::invalid_params,
                    "inadmissible L: below |gamma| / d(endpoints)");
    if (stride == 0) stride = 1;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < gamma.size(); i += stride) idx.push_back(i);
    if (idx.back() != gamma.size() - 1) idx.push_back(gamma.size() - 1);
    std::size_t m = idx.size();
    std::vector<std::vector<Length>> dist(m);
    for (std::size_t a = 0; a < m; ++a) {
        ShortestPathTree t = g.shortest_paths(gamma.points[idx[a]]);
        dist[a].resize(m);
        for (std::size_t b = 0; b < m; ++b) dist[a][b] = t.dist[gamma.points[idx[b]]];
    }
    auto D = [&](std::size_t a, std::size_t b) {
        return L * dist[a][b] - (gamma.cum[idx[b]] - gamma.cum[idx[a]]);
    };
    const double tol = 1e-9;
    auto find_segment = [&](std::size_t from)
        -> std::optional<std::pair<std::size_t, std::size_t>> {
        for (std::size_t a = from; a + 1 < m; ++a) {
            std::size_t best_b = m;
            for (std::size_t b = a + 1; b < m; ++b)
                if (D(a, b) <= tol) best_b = b;
            if (best_b < m) return std::make_pair(a, best_b);
        }
        return std::nullopt;
    };
    auto seg1 = find_segment(0);
    if (!seg1) {
        ParamPath out = gamma; // Case 0: already a certified quasi-geodesic
        return out;
    }
    auto seg2 = find_segment(seg1->second);
    auto build = [&](std::size_t lo, std::size_t hi) {
        return g.geodesic(gamma.points[idx[lo]], gamma.points[idx[hi]]);
    };
    ParamPath out;
    out.points.push_back(gamma.points[0]);
    out.cum.push_back(0.0);
    auto append_original = [&](std::size_t from_idx, std::size_t to_idx) {
        for (std::size_t k = from_idx + 1; k <= to_idx; ++k) {
            out.cum.push_back(out.cum.back() + (gamma.cum[k] - gamma.cum[k - 1]));
            out.points.push_back(gamma.points[k]);
        }
    };
    auto append_path = [&](const ParamPath& p) {
        for (std::size_t k = 1; k < p.points.size(); ++k) {
            out.cum.push_back(out.cum.back() + (p.cum[k] - p.cum[k - 1]));
            out.points.push_back(p.points[k]);
        }
    };
    append_original(0, idx[seg1->first]);
    append_path(build(seg1->first, seg1->second));
    if (seg2) {
        append_original(idx[seg1->second], idx[seg2->first]);
        append_path(build(seg2->first, seg2->second));
        append_original(idx[seg2->second], gamma.size() - 1);
    } else {
        append_original(idx[seg1->second], gamma.size() - 1);
    }
    return out;
}

/// Explicit Morse bound from a contraction hypothesis: minimal grid point E
/// with rho1(E) > 3A and rho2(r)/rho1(r) < 1/(3 L^2) for every grid r >= E,
/// then d = E/L^2 + A + 4(E + eps), T = L d + L A, B = E + L T / 2 + A.
inline MorseBoundReport morse_bound_from_contraction(const FunctionSpec& rho1,
                                                     const FunctionSpec& rho2,
                                                     Length eps, double L, double A,
                                                     const std::vector<double>& grid) {
    if (grid.empty()) throw Error(errc::invalid_params, "empty sample grid");
    if (L < 1.0 || A < 0.0 || eps < 0.0)
        throw Error(errc::invalid_params, "need L >= 1, A >= 0, eps >= 0");
    auto tail_ok = [&](std::size_t from) {
        for (std::size_t k = from; k < grid.size(); ++k) {
            double r1 = rho1(grid[k]);
            if (!(r1 > 0.0)) return false;
            if (!(rho2(grid[k]) / r1 < 1.0 / (3.0 * L * L))) return false;
        }
        return true;
    };
    std::optional<double> E;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (rho1(grid[k]) > 3.0 * A && tail_ok(k)) {
            E = grid[k];
            break;
        }
    }
    if (!E)
        throw Error(errc::not_verifiable,
                    "tail condition not achieved on the sample grid");
    MorseBoundReport rep;
    rep.E = *E;
    rep.d_bound = *E / (L * L) + A + 4.0 * (*E + eps);
    rep.T = L * rep.d_bound + L * A;
    rep.B = *E + L * rep.T / 2.0 + A;
    rep.rho1_name = rho1.name();
    rep.rho2_name = rho2.name();
    rep.eps = eps;
    rep.L = L;
    rep.A = A;
    return rep;
}

/// Optimal contraction bound from a Morse gauge:
/// rho'(r) = sup{ s <= 4r + 2 eps : s <= 18 mu(3(4r + 2 eps)/s) + 12 eps },
/// rho'(0) = 2 eps. The right side is non-increasing in s, so the supremum is
/// found by monotone bisection, then polished by one fixed-point step (which
/// makes locally-constant gauges exact).
inline Length contraction_bound_from_morse(const MorseFunctionSpec& mu, Length eps,
                                           Length r) {
    if (r < 0.0) throw Error(errc::invalid_params, "r must be >= 0");
    if (r == 0.0) return 2.0 * eps;
    double cap = 4.0 * r + 2.0 * eps;
    auto h = [&](double s) { return s - 18.0 * mu(3.0 * cap / s) - 12.0 * eps; };
    if (h(cap) <= 0.0) return cap;
    double lo = 0.0, hi = cap;
    // h(0+) <= 0 unless mu and eps both vanish, in which case the set is
    // empty and rho' = 0.
    if (eps == 0.0 && mu(3.0 * cap / (cap * 1e-12)) == 0.0 && mu(1.0) == 0.0)
        return 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        if (h(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double fixed = 18.0 * mu(3.0 * cap / lo) + 12.0 * eps;
    if (std::abs(fixed - lo) < 1e-6) return std::min(cap, fixed);
    return lo;
}

} // namespace metricgeo
