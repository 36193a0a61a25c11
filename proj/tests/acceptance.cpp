// End-to-end acceptance gate. Each criterion prints one line; any failed
// requirement aborts with [FAIL] and a nonzero exit.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "metricgeo/document.hpp"
#include "metricgeo/verify.hpp"
#include "oracles.hpp"

namespace mg = metricgeo;

namespace {

// Always-on requirement: never compiled out in Release.
#define REQUIRE(cond, msg)                                                      \
    do {                                                                        \
        if (!(cond)) {                                                          \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg \
                      << "\n";                                                  \
            std::exit(1);                                                       \
        }                                                                       \
    } while (0)

void pass(int k, const std::string& what) {
    std::cout << "[PASS] criterion " << k << ": " << what << "\n";
}

mg::FunctionSamples samples_of(const mg::Profile& p) {
    mg::FunctionSamples f;
    for (const auto& s : p.samples) f.points.emplace_back(s.r, s.value);
    return f;
}

const mg::FunctionSpec kId = mg::FunctionSpec::parse("id");

void criterion1() {
    mg::MarkedSpace tree = mg::make_tree(2, 14);
    mg::Profile p = mg::contraction_profile(tree, {}, kId,
                                            mg::linear_grid(tree.meta.valid_radius));
    for (const auto& s : p.samples)
        REQUIRE(s.value == 0.0, "tree contraction value nonzero at r=" << s.r);
    pass(1, "binary tree depth 14 contracts strongly (profile identically 0)");
}

void criterion2() {
    mg::MarkedSpace g = mg::make_grid_l1(400, 200);

    mg::Profile p = mg::contraction_profile(g, {}, kId, mg::linear_grid(50.0));
    for (const auto& s : p.samples)
        REQUIRE(s.value == s.r, "grid value != r at r=" << s.r);

    for (const char* rho2 : {"const:1", "const:8", "log2", "sqrt", "pow:0.9"}) {
        mg::ContractionCheck cc =
            mg::check_contracting(p, {kId, mg::FunctionSpec::parse(rho2)});
        REQUIRE(!cc.ok, "grid passed sublinear rho2 " << rho2);
        REQUIRE(!cc.violations.empty(), "no violation witness for " << rho2);
    }

    mg::MorseClassification mc = mg::classify_morse(mg::morse_profile(g, {2.0}));
    REQUIRE(mc.verdict == mg::MorseVerdict::NotMorse, "grid axis not flagged");

    mg::DivergenceProfile dp = mg::divergence_profile(
        g, {}, mg::linear_grid(16.0, 2.0), mg::default_s_grid(g));
    mg::SuperlinearResult sl = mg::completely_superlinear_test(dp);
    REQUIRE(sl.verdict == mg::SuperlinearVerdict::LinearWitness,
            "grid divergence verdict " << to_string(sl.verdict));
    pass(2, "400x200 L1 grid is non-contracting, not Morse, linear divergence");
}

void criterion3() {
    mg::MarkedSpace nk = mg::make_necklace(mg::FunctionSpec::parse("ceilsqrt"), 4, 120);
    mg::VertexId x9 = nk.landmark("x9");
    REQUIRE(nk.graph.distance_to_set(x9, nk.Y) == 18.0, "d(x9, Y) != 18");
    REQUIRE(mg::pair_projection_diameter(nk, x9, x9, {}) == 3.0,
            "diam of the x9 projection != 3");

    mg::Profile p =
        mg::contraction_profile(nk, {}, kId, mg::geometric_grid(240.0, 1.3, 8.0));
    mg::FitReport fit = mg::classify_growth(samples_of(p));
    REQUIRE(fit.cls == mg::GrowthClass::Power, "necklace class " << to_string(fit.cls));
    REQUIRE(fit.exponent && *fit.exponent >= 0.4 && *fit.exponent <= 0.6,
            "necklace exponent " << (fit.exponent ? *fit.exponent : -1.0));

    mg::MorseClassification mc =
        mg::classify_morse(mg::morse_profile(nk, {1.5, 2.0, 4.0}));
    REQUIRE(mc.verdict == mg::MorseVerdict::MorseConsistent,
            "necklace morse verdict " << to_string(mc.verdict));
    for (const mg::FitReport& rep : mc.per_L)
        REQUIRE(rep.sublinear_class(), "per-L class " << to_string(rep.cls));
    pass(3, "ceil-sqrt necklace: exact spot values, power exponent in [0.4, 0.6], "
            "bounded-or-sublinear escape heights");
}

void criterion4() {
    mg::MarkedSpace dn =
        mg::make_divergence_necklace(mg::FunctionSpec::parse("pow:2"), 1, 60);

    double t4 = 0.0;
    {
        const mg::ParamPath& g = *dn.gamma;
        mg::VertexId y4 = dn.landmark("y4");
        for (std::size_t k = 0; k < g.size(); ++k)
            if (g.points[k] == y4) t4 = g.cum[k];
    }
    auto lam = mg::lambda_divergence(dn, 4.0, t4, {1.0, 0.0, 1.0, 1.0});
    REQUIRE(lam && *lam == 16.0, "divergence at y4, radius 4 != 16");

    mg::DivergenceProfile dp = mg::divergence_profile(
        dn, {}, mg::geometric_grid(150.0, 1.5, 4.0), mg::default_s_grid(dn));
    mg::FitReport dfit = mg::classify_growth(mg::finite_samples(dp));
    REQUIRE(dfit.cls == mg::GrowthClass::Power || dfit.cls == mg::GrowthClass::Superlinear,
            "divergence class " << to_string(dfit.cls));
    REQUIRE(dfit.exponent && *dfit.exponent >= 1.8 && *dfit.exponent <= 2.2,
            "divergence exponent " << (dfit.exponent ? *dfit.exponent : -1.0));

    mg::Profile cp =
        mg::contraction_profile(dn, {}, kId, mg::geometric_grid(512.0, 1.5));
    mg::FitReport cfit = mg::classify_growth(samples_of(cp));
    REQUIRE(cfit.cls == mg::GrowthClass::Power, "contraction class " << to_string(cfit.cls));
    REQUIRE(cfit.exponent && *cfit.exponent >= 0.4 && *cfit.exponent <= 0.6,
            "contraction exponent " << (cfit.exponent ? *cfit.exponent : -1.0));
    pass(4, "square-bridge necklace: divergence ~ r^2, contraction ~ r^(1/2)");
}

void criterion5() {
    mg::FunctionSpec half = mg::FunctionSpec::parse("half");
    mg::MarkedSpace ls = mg::make_log_space(half, 2.0, 16);
    std::vector<double> grid = mg::geometric_grid(16384.0, 2.0);

    mg::Profile ph = mg::contraction_profile(ls, {}, half, grid);
    REQUIRE(mg::check_contracting(ph, {half, mg::FunctionSpec::parse("const:2")}).ok,
            "(r/2, 2) hypothesis rejected");

    mg::Profile pid = mg::contraction_profile(ls, {}, kId, grid);
    mg::FitReport fit = mg::classify_growth(samples_of(pid));
    REQUIRE(fit.cls == mg::GrowthClass::Logarithmic,
            "id-profile class " << to_string(fit.cls));

    REQUIRE(mg::abel_steps(half, 2.0, 16.0) == 4, "abel_steps(16) != 4");
    mg::AbelData ab = mg::sigma_sequence(half, 2.0, 12);
    for (std::size_t i = 0; i <= 12; ++i)
        REQUIRE(mg::abel_steps(half, 2.0, ab.sigma[i]) == i,
                "abel_steps(sigma(" << i << ")) != " << i);

    mg::FunctionSamples alpha;
    for (double r : grid)
        alpha.points.emplace_back(
            r, static_cast<double>(mg::abel_steps(half, 2.0, std::max(r, 1.0))));
    REQUIRE(mg::preceq_fit(samples_of(pid), alpha).has_value(),
            "profile not below the step count");
    REQUIRE(mg::preceq_fit(alpha, samples_of(pid)).has_value(),
            "step count not below the profile");
    pass(5, "log-space: (r/2, 2)-contracting, logarithmic id-profile, "
            "step count inverts sigma and matches the profile both ways");
}

void criterion6() {
    mg::MorseFunctionSpec zero =
        mg::MorseFunctionSpec::symbolic("zero", [](double, double) { return 0.0; });
    for (double r : {0.0, 1.0, 10.0, 100.0})
        REQUIRE(mg::contraction_bound_from_morse(zero, 1.0, r) ==
                    std::min(4.0 * r + 2.0, 12.0),
                "bound at r=" << r);

    mg::MorseBoundReport rep = mg::morse_bound_from_contraction(
        kId, mg::FunctionSpec::parse("const:0"), 0.0, 1.0, 0.0,
        mg::linear_grid(10.0));
    REQUIRE(rep.E == 1.0 && rep.d_bound == 5.0 && rep.T == 5.0 && rep.B == 3.5,
            "report (" << rep.E << "," << rep.d_bound << "," << rep.T << ","
                       << rep.B << ") != (1,5,5,3.5)");
    pass(6, "bound calculators reproduce the closed-form values exactly");
}

void criterion7() {
    std::vector<mg::MarkedSpace> spaces;
    spaces.push_back(mg::make_grid_l1(24, 12));
    spaces.push_back(mg::make_necklace(mg::FunctionSpec::parse("ceilsqrt"), 4, 12));
    std::mt19937_64 rng(424242);
    int done = 0;
    while (done < 200) {
        const mg::MarkedSpace& s = spaces[done % 2];
        std::size_t n = s.graph.vertex_count();
        mg::VertexId a = mg::VertexId(rng() % n), w1 = mg::VertexId(rng() % n),
                     w2 = mg::VertexId(rng() % n), b = mg::VertexId(rng() % n);
        if (a == b) continue;
        mg::ParamPath p = s.graph.geodesic(a, w1);
        for (const mg::ParamPath& leg :
             {s.graph.geodesic(w1, w2), s.graph.geodesic(w2, b)})
            for (std::size_t k = 1; k < leg.size(); ++k) {
                p.cum.push_back(p.cum.back() + (leg.cum[k] - leg.cum[k - 1]));
                p.points.push_back(leg.points[k]);
            }
        double L = std::ceil(p.length() / s.graph.distance(a, b)) + 1.0;
        mg::ParamPath out = mg::shortcut_quasigeodesify(s.graph, p, L);
        REQUIRE(out.points.front() == a && out.points.back() == b,
                "endpoints moved (iteration " << done << ")");
        REQUIRE(out.length() <= p.length() + 1e-12,
                "output longer than input (iteration " << done << ")");
        // One resolution unit of additive slack on the lower bound.
        REQUIRE(s.graph.is_quasigeodesic(out, {L, 1.0}),
                "output not an (L, 0)-quasi-geodesic (iteration " << done << ")");
        // Degradation: every new vertex stays near the input path.
        double slack = p.length() / (2.0 * L) + 1e-9;
        for (mg::VertexId v : out.points) {
            bool old_vertex = false;
            for (mg::VertexId u : p.points)
                if (u == v) old_vertex = true;
            if (!old_vertex)
                REQUIRE(s.graph.distance_to_set(v, p.points) <= slack,
                        "new vertex drifts beyond |gamma|/(2L) (iteration "
                            << done << ")");
        }
        ++done;
    }
    pass(7, "200 random 3-geodesic concatenations shortcut to certified "
            "quasi-geodesics with bounded degradation");
}

void criterion8() {
    mg::SuiteReport rep = mg::run_suite("git");
    for (const mg::CheckResult& c : rep.checks)
        REQUIRE(c.pass, "geodesic-image check failed: " << c.name << " " << c.detail);
    pass(8, "geodesic image envelopes hold on necklace, tree, and bounded-profile "
            "spaces");
}

void criterion9() {
    mg::SuiteReport rep = mg::run_suite("robustness");
    for (const mg::CheckResult& c : rep.checks)
        REQUIRE(c.pass, "robustness check failed: " << c.name << " " << c.detail);
    pass(9, "fitted classes stable under epsilon, Hausdorff-2 moves of Y, and "
            "divergence parameter changes");
}

void criterion10() {
    std::vector<mg::MarkedSpace> spaces;
    spaces.push_back(mg::make_cycle_arc(24, 6));
    spaces.push_back(mg::make_tree(2, 7));
    spaces.push_back(mg::make_grid_l1(20, 10));
    spaces.push_back(mg::make_necklace(mg::FunctionSpec::parse("ceilsqrt"), 4, 10));
    spaces.push_back(mg::make_divergence_necklace(mg::FunctionSpec::parse("pow:2"), 1, 6));
    spaces.push_back(mg::make_log_space(mg::FunctionSpec::parse("half"), 2.0, 6));
    spaces.push_back(mg::make_halfplane(6));

    for (const mg::MarkedSpace& s : spaces) {
        REQUIRE(s.graph.vertex_count() <= 500, s.meta.family << " too large");
        auto ap = oracle::all_pairs(s.graph);
        std::vector<double> grid = mg::linear_grid(s.meta.valid_radius);

        for (double eps : {0.0, 1.0}) {
            mg::Profile p = mg::contraction_profile(s, {eps}, kId, grid);
            std::vector<double> want =
                oracle::contraction_values(s, eps, kId, grid, ap);
            REQUIRE(p.samples.size() == want.size(), "size mismatch");
            for (std::size_t k = 0; k < want.size(); ++k)
                REQUIRE(p.samples[k].value == want[k],
                        s.meta.family << " eps=" << eps << " r=" << p.samples[k].r
                                      << ": " << p.samples[k].value
                                      << " != oracle " << want[k]);
        }

        // Byte-identical emission across worker counts.
        mg::Profile base = mg::contraction_profile(s, {}, kId, grid, {}, 1);
        std::string csv1 = mg::profile_to_csv(base);
        for (unsigned jobs : {4u, 8u}) {
            mg::Profile pj = mg::contraction_profile(s, {}, kId, grid, {}, jobs);
            REQUIRE(mg::profile_to_csv(pj) == csv1,
                    s.meta.family << " CSV differs at jobs=" << jobs);
        }

        // Exhaustive (r, s) divergence against the blocked-ball oracle.
        mg::DivergenceParams dpms{1.0, 0.0, 1.0, 1.0};
        double glen = s.gamma->length();
        std::vector<double> s_grid = mg::default_s_grid(s);
        for (double r = 1.0; r <= std::min(8.0, s.meta.valid_radius); r += 1.0)
            for (double t : s_grid) {
                if (t - r < 0.0 || t + r > glen) continue;
                auto got = mg::lambda_divergence(s, r, t, dpms);
                auto want = oracle::lambda_div(s, r, t, dpms);
                REQUIRE(got.has_value() == want.has_value(),
                        s.meta.family << " divergence finiteness differs at r="
                                      << r << " t=" << t);
                if (got)
                    REQUIRE(*got == *want, s.meta.family << " divergence differs at r="
                                                         << r << " t=" << t);
            }
    }

    // Divergence and morse CSVs are jobs-independent too.
    {
        mg::MarkedSpace dn =
            mg::make_divergence_necklace(mg::FunctionSpec::parse("pow:2"), 1, 6);
        mg::DivergenceProfile d1 = mg::divergence_profile(
            dn, {}, mg::linear_grid(8.0, 1.0), mg::default_s_grid(dn), 1);
        mg::MarkedSpace g = mg::make_grid_l1(20, 10);
        mg::MorseProfileResult m1 = mg::morse_profile(g, {2.0, 4.0}, 1, 2.0);
        for (unsigned jobs : {4u, 8u}) {
            mg::DivergenceProfile dj = mg::divergence_profile(
                dn, {}, mg::linear_grid(8.0, 1.0), mg::default_s_grid(dn), jobs);
            REQUIRE(mg::divergence_to_csv(dj) == mg::divergence_to_csv(d1),
                    "divergence CSV differs at jobs=" << jobs);
            mg::MorseProfileResult mj = mg::morse_profile(g, {2.0, 4.0}, jobs, 2.0);
            REQUIRE(mg::morse_to_csv(mj) == mg::morse_to_csv(m1),
                    "morse CSV differs at jobs=" << jobs);
        }
    }
    pass(10, "small-space analyzers match brute-force oracles exactly and are "
             "byte-identical across 1, 4, and 8 workers");
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    std::cout << "all criteria passed\n";
    return 0;
}
