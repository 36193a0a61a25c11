#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "metricgeo/asymptotics.hpp"
#include "metricgeo/spaces.hpp"

using namespace metricgeo;

namespace {

FunctionSamples sample(double r_lo, double r_hi, double step,
                       double (*f)(double)) {
    FunctionSamples s;
    for (double r = r_lo; r <= r_hi; r *= step) s.points.emplace_back(r, f(r));
    return s;
}

} // namespace

TEST_CASE("sublinear window verdicts") {
    CHECK(is_sublinear_window(sample(1, 1e4, 2, [](double r) {
              return std::sqrt(r);
          })) == WindowVerdict::SublinearOnWindow);
    CHECK(is_sublinear_window(sample(1, 1e4, 2, [](double r) { return r; })) ==
          WindowVerdict::NotSublinearOnWindow);
    CHECK(is_sublinear_window(sample(2, 1e4, 2, [](double r) {
              return r / std::log(r);
          })) == WindowVerdict::SublinearOnWindow);
    FunctionSamples tiny;
    tiny.points = {{1, 1}, {2, 2}};
    CHECK(is_sublinear_window(tiny) == WindowVerdict::Inconclusive);
}

TEST_CASE("preorder fits") {
    FunctionSamples f = sample(1, 512, 2, [](double r) { return r; });
    auto self_fit = preceq_fit(f, f);
    REQUIRE(self_fit.has_value());
    CHECK(self_fit->c1 == 1.0);
    CHECK(self_fit->c2 == 1.0);
    CHECK(self_fit->c3 == 0.0);
    CHECK(self_fit->c4 == 0.0);

    FunctionSamples affine = sample(1, 512, 2, [](double r) { return 2 * r + 3; });
    auto fit = preceq_fit(affine, f);
    REQUIRE(fit.has_value());
    // Re-verify the certified inequality pointwise.
    FunctionSpec g = FunctionSpec::sampled("g", f.points);
    for (auto [r, v] : affine.points)
        CHECK(v <= fit->c1 * g(fit->c2 * r + fit->c3) + fit->c4 + 1e-9);

    FunctionSamples logf = sample(2, 1e4, 2, [](double r) { return std::log2(r); });
    FunctionSamples lin = sample(2, 1e4, 2, [](double r) { return r; });
    CHECK_FALSE(preceq_fit(lin, logf).has_value());
    CHECK(preceq_fit(logf, lin).has_value());
}

TEST_CASE("growth classification") {
    FunctionSamples c = sample(1, 512, 2, [](double) { return 7.0; });
    CHECK(classify_growth(c).cls == GrowthClass::Bounded);

    FunctionSamples sq = sample(1, 512, 2, [](double r) { return r * r; });
    FitReport rep = classify_growth(sq);
    REQUIRE(rep.exponent.has_value());
    CHECK((rep.cls == GrowthClass::Power || rep.cls == GrowthClass::Superlinear));
    CHECK(*rep.exponent > 1.8);
    CHECK(*rep.exponent < 2.2);

    FunctionSamples lg = sample(2, 1e5, 2, [](double r) { return std::log2(r); });
    CHECK(classify_growth(lg).cls == GrowthClass::Logarithmic);

    FunctionSamples lin = sample(1, 1e4, 2, [](double r) { return 3 * r; });
    CHECK(classify_growth(lin).cls == GrowthClass::Linear);

    FunctionSamples rt = sample(1, 1e4, 2, [](double r) { return std::sqrt(r); });
    FitReport rtrep = classify_growth(rt);
    CHECK(rtrep.cls == GrowthClass::Power);
    CHECK(rtrep.sublinear_class());

    // Class is invariant under positive scaling of values.
    for (double scale : {0.5, 2.0}) {
        FunctionSamples scaled = rt;
        for (auto& [r, v] : scaled.points) v *= scale;
        CHECK(classify_growth(scaled).cls == rtrep.cls);
    }
}

TEST_CASE("abel step counts") {
    FunctionSpec half = FunctionSpec::parse("half");
    CHECK(abel_steps(half, 2.0, 1.5) == 0); // inside [A', A)
    CHECK(abel_steps(half, 2.0, 16.0) == 4);
    CHECK_THROWS_AS(abel_steps(half, 2.0, 0.5), Error);

    FunctionSpec twosqrt = FunctionSpec::parse("twosqrt");
    CHECK(abel_steps(twosqrt, 1.0, 9.0) == 3);
    CHECK(abel_steps(twosqrt, 1.0, 25.0) == 5);

    // Abel equation against the sigma sequence and its phi-inverse steps.
    AbelData d = sigma_sequence(half, 2.0, 10);
    for (std::size_t i = 0; i < d.sigma.size(); ++i)
        CHECK(abel_steps(half, 2.0, d.sigma[i]) == i);
    AbelData sq = sigma_sequence(twosqrt, 1.0, 8);
    for (std::size_t i = 1; i < sq.sigma.size(); ++i)
        CHECK(abel_steps(twosqrt, 1.0, sq.sigma[i]) == i);
}
