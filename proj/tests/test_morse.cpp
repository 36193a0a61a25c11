#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "metricgeo/morse.hpp"
#include "metricgeo/spaces.hpp"

using namespace metricgeo;

namespace {

ParamPath concat3(const MetricGraph& g, VertexId a, VertexId w1, VertexId w2,
                  VertexId b) {
    ParamPath p = g.geodesic(a, w1);
    for (const ParamPath& leg : {g.geodesic(w1, w2), g.geodesic(w2, b)})
        for (std::size_t k = 1; k < leg.size(); ++k) {
            p.cum.push_back(p.cum.back() + (leg.cum[k] - leg.cum[k - 1]));
            p.points.push_back(leg.points[k]);
        }
    return p;
}

} // namespace

TEST_CASE("detour bound on a tree is zero") {
    MarkedSpace tree = make_tree(2, 8);
    DetourResult res = detour_bound(tree, tree.Y.front(), tree.Y.back(), 4.0);
    CHECK(res.B == 0.0);

    // Endpoints must lie on Y.
    VertexId off = 0;
    std::vector<char> mask = tree.y_mask();
    while (mask[off]) ++off;
    CHECK_THROWS_AS(detour_bound(tree, off, tree.Y.back(), 2.0), Error);
    CHECK_THROWS_AS(detour_bound(tree, tree.Y.front(), tree.Y.back(), 0.5), Error);
}

TEST_CASE("detour bound on the grid reaches half the separation") {
    MarkedSpace g = make_grid_l1(40, 20);
    VertexId y1 = 10, y2 = 22; // axis vertices, separation 12
    for (double L : {2.0, 4.0}) {
        DetourResult res = detour_bound(g, y1, y2, L);
        CHECK(res.B == 6.0);
        // Witness re-verification.
        REQUIRE(res.witness.certified_qg.has_value());
        const ParamPath& p = res.witness.certified_qg->second;
        CHECK(p.points.front() == y1);
        CHECK(p.points.back() == y2);
        CHECK(g.graph.is_quasigeodesic(p, {L, 1e-9}));
        Length reached = 0.0;
        for (VertexId v : p.points)
            reached = std::max(reached, g.graph.distance_to_set(v, g.Y));
        CHECK(reached == res.B);
    }
    // Monotone in L.
    double prev = -1.0;
    for (double L : {1.0, 1.5, 2.0, 4.0}) {
        DetourResult res = detour_bound(g, y1, y2, L);
        CHECK(res.B >= prev);
        prev = res.B;
    }
}

TEST_CASE("morse profile classifications") {
    MarkedSpace tree = make_tree(2, 8);
    MorseProfileResult tp = morse_profile(tree, {1.5, 2.0});
    for (const Profile& prof : tp.per_L)
        for (const auto& s : prof.samples) CHECK(s.value == 0.0);
    CHECK(classify_morse(tp).verdict == MorseVerdict::MorseConsistent);

    MarkedSpace g = make_grid_l1(120, 60);
    MorseProfileResult gp = morse_profile(g, {2.0, 4.0});
    MorseClassification gc = classify_morse(gp);
    CHECK(gc.verdict == MorseVerdict::NotMorse);
    for (const FitReport& rep : gc.per_L)
        CHECK(rep.cls == GrowthClass::Linear);

    MarkedSpace neck = make_necklace(FunctionSpec::parse("ceilsqrt"), 4, 60);
    MorseClassification nc = classify_morse(morse_profile(neck, {1.5, 2.0, 4.0}));
    CHECK(nc.verdict == MorseVerdict::MorseConsistent);

    CHECK_THROWS_AS(morse_profile(tree, {}), Error);
    MarkedSpace no_gamma{tree.graph, tree.Y, std::nullopt, {}, tree.meta};
    CHECK_THROWS_AS(morse_profile(no_gamma, {2.0}), Error);
}

TEST_CASE("morse profile is independent of the worker count") {
    MarkedSpace g = make_grid_l1(60, 30);
    MorseProfileResult p1 = morse_profile(g, {2.0, 4.0}, 1, 2.0);
    MorseProfileResult p4 = morse_profile(g, {2.0, 4.0}, 4, 2.0);
    REQUIRE(p1.per_L.size() == p4.per_L.size());
    for (std::size_t li = 0; li < p1.per_L.size(); ++li) {
        REQUIRE(p1.per_L[li].samples.size() == p4.per_L[li].samples.size());
        for (std::size_t k = 0; k < p1.per_L[li].samples.size(); ++k) {
            CHECK(p1.per_L[li].samples[k].r == p4.per_L[li].samples[k].r);
            CHECK(p1.per_L[li].samples[k].value == p4.per_L[li].samples[k].value);
        }
    }
}

TEST_CASE("shortcut leaves certified quasi-geodesics alone") {
    MarkedSpace g = make_grid_l1(20, 10);
    ParamPath geo = g.graph.geodesic(0, 15);
    ParamPath out = shortcut_quasigeodesify(g.graph, geo, 2.0);
    CHECK(out.points == geo.points);
    CHECK(out.length() == geo.length());
}

TEST_CASE("shortcut repairs a spur") {
    MarkedSpace g = make_grid_l1(20, 10);
    auto id = [&](std::size_t i, std::size_t j) { return VertexId(j * 21 + i); };
    // Out-and-back through (6,8): a gross violation at moderate L.
    ParamPath spur = concat3(g.graph, id(0, 0), id(6, 8), id(8, 0), id(16, 0));
    double L = 12.0;
    ParamPath out = shortcut_quasigeodesify(g.graph, spur, L);
    CHECK(out.points.front() == spur.points.front());
    CHECK(out.points.back() == spur.points.back());
    CHECK(out.length() <= spur.length() + 1e-12);
    CHECK(g.graph.is_quasigeodesic(out, {L, 1.0}));

    CHECK_THROWS_AS(
        shortcut_quasigeodesify(g.graph, g.graph.make_path({id(0, 0)}), 2.0),
        Error);
    // Inadmissible budget: L below |gamma| / d(endpoints).
    CHECK_THROWS_AS(shortcut_quasigeodesify(g.graph, spur, 1.0), Error);
}

TEST_CASE("shortcut property loop on random 3-geodesic concatenations") {
    std::vector<MarkedSpace> spaces;
    spaces.push_back(make_grid_l1(24, 12));
    spaces.push_back(make_necklace(FunctionSpec::parse("ceilsqrt"), 4, 12));
    std::mt19937_64 rng(101);
    int done = 0;
    while (done < 200) {
        const MarkedSpace& s = spaces[done % 2];
        std::size_t n = s.graph.vertex_count();
        VertexId a = VertexId(rng() % n), w1 = VertexId(rng() % n),
                 w2 = VertexId(rng() % n), b = VertexId(rng() % n);
        if (a == b) continue;
        ParamPath p = concat3(s.graph, a, w1, w2, b);
        double L = std::ceil(p.length() / s.graph.distance(a, b)) + 1.0;
        ParamPath out = shortcut_quasigeodesify(s.graph, p, L);
        CHECK(out.points.front() == a);
        CHECK(out.points.back() == b);
        CHECK(out.length() <= p.length() + 1e-12);
        CHECK(s.graph.is_quasigeodesic(out, {L, 1.0}));
        ++done;
    }
}

TEST_CASE("morse bound from a contraction hypothesis") {
    FunctionSpec id = FunctionSpec::parse("id");
    FunctionSpec zero = FunctionSpec::parse("const:0");
    MorseBoundReport rep =
        morse_bound_from_contraction(id, zero, 0.0, 1.0, 0.0, linear_grid(10.0));
    CHECK(rep.E == 1.0);
    CHECK(rep.d_bound == 5.0);
    CHECK(rep.T == 5.0);
    CHECK(rep.B == 3.5);

    // rho2 = rho1 never satisfies the tail ratio.
    CHECK_THROWS_AS(
        morse_bound_from_contraction(id, id, 0.0, 1.0, 0.0, linear_grid(10.0)),
        Error);
    CHECK_THROWS_AS(
        morse_bound_from_contraction(id, zero, 0.0, 0.5, 0.0, linear_grid(10.0)),
        Error);
    CHECK_THROWS_AS(morse_bound_from_contraction(id, zero, 0.0, 1.0, 0.0, {}),
                    Error);
}

TEST_CASE("contraction bound from a morse gauge") {
    MorseFunctionSpec zero =
        MorseFunctionSpec::symbolic("zero", [](double, double) { return 0.0; });
    for (double r : {0.0, 1.0, 10.0, 100.0})
        CHECK(contraction_bound_from_morse(zero, 1.0, r) ==
              std::min(4.0 * r + 2.0, 12.0));

    // Vanishing gauge and epsilon: no escape at all.
    CHECK(contraction_bound_from_morse(zero, 0.0, 7.0) == 0.0);

    // mu(L) = L with eps = 0: rho'(r) = min(4r, sqrt(216 r)).
    MorseFunctionSpec lin = MorseFunctionSpec::of_L(FunctionSpec::parse("id"));
    for (double r : {1.0, 4.0, 100.0, 1000.0}) {
        double want = std::min(4.0 * r, std::sqrt(216.0 * r));
        CHECK(contraction_bound_from_morse(lin, 0.0, r) ==
              Catch::Approx(want).margin(1e-6));
    }

    // Always within the trivial cap.
    for (double r = 0.0; r <= 30.0; r += 1.0)
        CHECK(contraction_bound_from_morse(lin, 2.0, r) <= 4.0 * r + 4.0 + 1e-9);

    CHECK_THROWS_AS(contraction_bound_from_morse(zero, 1.0, -1.0), Error);
}
