#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "metricgeo/asymptotics.hpp"
#include "metricgeo/divergence.hpp"
#include "metricgeo/morse.hpp"
#include "metricgeo/projection.hpp"
#include "metricgeo/spaces.hpp"

namespace metricgeo {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;

    bool all_pass() const {
        for (const CheckResult& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

namespace detail {

inline FunctionSamples profile_samples(const Profile& p) {
    FunctionSamples f;
    for (const ProfileSample& s : p.samples) f.points.emplace_back(s.r, s.value);
    return f;
}

inline FitReport classify_profile(const Profile& p) {
    return classify_growth(profile_samples(p));
}

inline std::string fit_desc(const FitReport& rep) {
    std::ostringstream os;
    os << to_string(rep.cls);
    if (rep.exponent) os << " alpha=" << *rep.exponent;
    os << " r2=" << rep.r2 << " window=[" << rep.window_lo << "," << rep.window_hi
       << "]";
    return os.str();
}

inline void add(SuiteReport& rep, const std::string& name, bool pass,
                const std::string& detail) {
    rep.checks.push_back({name, pass, detail});
}

/// Copy of a space with Y replaced (gamma dropped: the new Y need not be a
/// path). Used for Hausdorff-perturbation robustness checks.
inline MarkedSpace with_subspace(const MarkedSpace& s, PointSet Y) {
    MarkedSpace out{s.graph, std::move(Y), std::nullopt, s.landmarks, s.meta};
    return out;
}

} // namespace detail

/// Geodesic-image envelopes against the empirical contraction function: for
/// every sampled segment, diam of the projection must stay under
/// 4 eps + 12 rho(4 max_endpoint_dist) and 4 eps + 12 rho(max_interior_dist),
/// with rho the sampled profile. Segments whose argument leaves the profile
/// window are skipped (window-relative verdict).
struct GitEnvelopeResult {
    std::size_t checked = 0;
    std::size_t out_of_window = 0;
    std::size_t violations = 0;
    double worst_margin = 0.0; // max (diam - bound), negative when all hold
    bool pass = false;
};

inline GitEnvelopeResult git_envelope_check(const GeoImageProfile& gip,
                                            const Profile& contraction,
                                            Length eps, double tol = 1e-9) {
    FunctionSamples fs = detail::profile_samples(contraction);
    FunctionSpec rho = FunctionSpec::sampled("rho_hat", fs.points);
    double r_max = fs.points.back().first;
    GitEnvelopeResult out;
    out.worst_margin = -std::numeric_limits<double>::infinity();
    for (const GeoImageSample& s : gip.samples) {
        bool in_window = false;
        if (4.0 * s.max_endpoint_dist <= r_max + 1e-9) {
            in_window = true;
            double bound = 4.0 * eps + 12.0 * rho(4.0 * s.max_endpoint_dist);
            out.worst_margin = std::max(out.worst_margin, s.diam_proj - bound);
            if (s.diam_proj > bound + tol) ++out.violations;
        }
        if (s.max_interior_dist <= r_max + 1e-9) {
            in_window = true;
            double bound = 4.0 * eps + 12.0 * rho(s.max_interior_dist);
            out.worst_margin = std::max(out.worst_margin, s.diam_proj - bound);
            if (s.diam_proj > bound + tol) ++out.violations;
        }
        if (in_window)
            ++out.checked;
        else
            ++out.out_of_window;
    }
    out.pass = out.checked > 0 && out.violations == 0;
    return out;
}

/// Equivalence of sublinear contraction and the Morse property on the
/// built-in examples: tree and log-space and necklace on the positive side,
/// the L1 grid as the expected non-example.
inline SuiteReport verify_theorem14(unsigned jobs = 1) {
    SuiteReport rep{"theorem14", {}};
    FunctionSpec id = FunctionSpec::parse("id");

    {
        MarkedSpace tree = make_tree(2, 10);
        Profile prof = contraction_profile(tree, {}, id,
                                           linear_grid(tree.meta.valid_radius),
                                           {}, jobs);
        double vmax = 0.0;
        for (const auto& s : prof.samples) vmax = std::max(vmax, s.value);
        detail::add(rep, "tree contraction profile identically zero", vmax == 0.0,
                    "max value " + std::to_string(vmax));
        MorseProfileResult mp = morse_profile(tree, {1.0, 2.0, 4.0}, jobs);
        double mu_max = 0.0;
        for (const Profile& p : mp.per_L)
            for (const auto& s : p.samples) mu_max = std::max(mu_max, s.value);
        detail::add(rep, "tree detour heights identically zero", mu_max == 0.0,
                    "max escape height " + std::to_string(mu_max));
    }

    {
        MarkedSpace neck = make_necklace(FunctionSpec::parse("ceilsqrt"), 4, 60);
        std::vector<double> grid = geometric_grid(120.0, 1.5);
        Profile prof = contraction_profile(neck, {}, id, grid, {}, jobs);
        FitReport fit = detail::classify_profile(prof);
        bool ok = fit.cls == GrowthClass::Power && fit.exponent &&
                  *fit.exponent > 0.3 && *fit.exponent < 0.7;
        detail::add(rep, "necklace contraction profile is a sublinear power", ok,
                    detail::fit_desc(fit));
        MorseClassification mc =
            classify_morse(morse_profile(neck, {1.5, 2.0, 4.0}, jobs));
        detail::add(rep, "necklace classified morse-consistent",
                    mc.verdict == MorseVerdict::MorseConsistent,
                    to_string(mc.verdict));
    }

    {
        MarkedSpace ls = make_log_space(FunctionSpec::parse("half"), 2.0, 12);
        double r_hi = std::min(1024.0, ls.meta.valid_radius);
        std::vector<double> grid = geometric_grid(r_hi, 2.0);
        Profile p_half =
            contraction_profile(ls, {}, FunctionSpec::parse("half"), grid, {}, jobs);
        ContractionCheck cc = check_contracting(
            p_half, {FunctionSpec::parse("half"), FunctionSpec::parse("const:2")});
        detail::add(rep, "log-space is (r/2, 2)-contracting on window", cc.ok,
                    std::to_string(cc.violations.size()) + " bound violations, ratio " +
                        to_string(cc.ratio_verdict));
        Profile p_id = contraction_profile(ls, {}, id, grid, {}, jobs);
        FitReport fit = detail::classify_profile(p_id);
        detail::add(rep, "log-space identity profile classifies logarithmic",
                    fit.cls == GrowthClass::Logarithmic, detail::fit_desc(fit));
    }

    {
        MarkedSpace grid_space = make_grid_l1(120, 60);
        Profile prof = contraction_profile(grid_space, {}, id, linear_grid(30.0),
                                           {}, jobs);
        bool exact = true;
        for (const auto& s : prof.samples)
            if (s.value != s.r) exact = false;
        FitReport fit = detail::classify_profile(prof);
        ContractionCheck cc =
            check_contracting(prof, {id, FunctionSpec::parse("sqrt")});
        MorseClassification mc =
            classify_morse(morse_profile(grid_space, {2.0, 4.0}, jobs));
        bool flagged = exact && !cc.ok && fit.cls == GrowthClass::Linear &&
                       mc.verdict == MorseVerdict::NotMorse;
        detail::add(rep, "grid non-example flagged (linear profile, not Morse)",
                    flagged,
                    "value=r exact: " + std::string(exact ? "yes" : "no") + ", " +
                        detail::fit_desc(fit) + ", " + to_string(mc.verdict));
    }
    return rep;
}

/// Completely superlinear divergence on the divergence necklace, linear
/// witness on the grid, vacuous pass on the tree.
inline SuiteReport verify_theorem15(unsigned jobs = 1) {
    SuiteReport rep{"theorem15", {}};

    {
        MarkedSpace dn = make_divergence_necklace(FunctionSpec::parse("pow:2"), 1, 40);
        DivergenceParams spot{1.0, 0.0, 1.0, 1.0};
        double t = 0.0;
        {
            // Arc position of the bead-4 center along gamma.
            VertexId y4 = dn.landmark("y4");
            const ParamPath& g = *dn.gamma;
            for (std::size_t k = 0; k < g.points.size(); ++k)
                if (g.points[k] == y4) t = g.cum[k];
        }
        std::optional<Length> lam = lambda_divergence(dn, 4.0, t, spot);
        bool ok = lam && std::abs(*lam - 16.0) < 1e-9;
        detail::add(rep, "necklace detour at radius 4 over bead 4 equals 16", ok,
                    lam ? "value " + std::to_string(*lam) : "infinite");

        // Past r ~ 100 every avoiding route is blocked (infinite values), so
        // the growth fit runs on a denser grid inside the finite region. The
        // window test keeps the wide grid: blocked radii defeat every linear
        // witness.
        DivergenceProfile prof = divergence_profile(
            dn, {}, geometric_grid(100.0, 1.5), default_s_grid(dn), jobs);
        FitReport fit = classify_growth(finite_samples(prof));
        bool expo = fit.cls == GrowthClass::Power && fit.exponent &&
                    *fit.exponent > 1.5 && fit.r2 >= 0.95;
        detail::add(rep, "necklace divergence grows as a superlinear power",
                    expo || fit.cls == GrowthClass::Superlinear,
                    detail::fit_desc(fit));
        DivergenceProfile wide = divergence_profile(
            dn, {}, geometric_grid(512.0, 2.0), default_s_grid(dn), jobs);
        SuperlinearResult sl = completely_superlinear_test(wide);
        detail::add(rep, "necklace divergence passes the superlinear window test",
                    sl.verdict == SuperlinearVerdict::SuperlinearOnWindow,
                    to_string(sl.verdict));

        Profile cp = contraction_profile(dn, {}, FunctionSpec::parse("id"),
                                         geometric_grid(512.0, 1.5), {}, jobs);
        FitReport cfit = detail::classify_profile(cp);
        bool half = cfit.cls == GrowthClass::Power && cfit.exponent &&
                    *cfit.exponent > 0.3 && *cfit.exponent < 0.7;
        detail::add(rep, "necklace contraction exponent near one half", half,
                    detail::fit_desc(cfit));
    }

    {
        MarkedSpace grid_space = make_grid_l1(120, 60);
        DivergenceProfile prof = divergence_profile(
            grid_space, {}, linear_grid(20.0, 2.0), default_s_grid(grid_space), jobs);
        SuperlinearResult sl = completely_superlinear_test(prof);
        detail::add(rep, "grid divergence yields a linear witness",
                    sl.verdict == SuperlinearVerdict::LinearWitness,
                    to_string(sl.verdict));
    }

    {
        MarkedSpace tree = make_tree(2, 12);
        DivergenceParams dp{1.0, 0.0, 1.0, 1.0};
        DivergenceProfile prof = divergence_profile(tree, dp, linear_grid(5.0, 1.0),
                                                    default_s_grid(tree), jobs);
        bool all_inf = true;
        for (const auto& s : prof.samples)
            if (s.r >= 2.0 && s.value) all_inf = false;
        SuperlinearResult sl = completely_superlinear_test(prof);
        detail::add(rep, "tree divergence infinite at positive forbidden radius",
                    all_inf, to_string(sl.verdict));
    }
    return rep;
}

/// Geodesic image theorem: envelopes from the empirical contraction function
/// on the necklace, zero projections on the tree, and a uniform bound past
/// R2 on a bounded-profile space.
inline SuiteReport verify_git(unsigned jobs = 1) {
    SuiteReport rep{"git", {}};
    FunctionSpec id = FunctionSpec::parse("id");

    {
        MarkedSpace neck = make_necklace(FunctionSpec::parse("ceilsqrt"), 4, 60);
        ProjectionTable table(neck, 0.0);
        Profile prof = contraction_profile(neck, {}, id, geometric_grid(120.0, 1.5),
                                           {}, jobs, &table);
        GeoImageProfile gip = geodesic_image_profile(neck, {}, 4.0, {}, jobs, &table);
        GitEnvelopeResult env = git_envelope_check(gip, prof, 0.0);
        std::ostringstream os;
        os << env.checked << " segments, " << env.violations << " violations, "
           << env.out_of_window << " out of window, worst margin "
           << env.worst_margin;
        detail::add(rep, "necklace segments satisfy both envelopes", env.pass,
                    os.str());
    }

    {
        MarkedSpace tree = make_tree(2, 10);
        GeoImageProfile gip = geodesic_image_profile(tree, {}, 1.0, {}, jobs);
        double dmax = 0.0;
        for (const auto& s : gip.samples) dmax = std::max(dmax, s.diam_proj);
        detail::add(rep, "tree geodesic projections are single points",
                    !gip.samples.empty() && dmax == 0.0,
                    std::to_string(gip.samples.size()) + " segments, max diam " +
                        std::to_string(dmax));
    }

    {
        MarkedSpace arc = make_cycle_arc(64, 4);
        Profile prof =
            contraction_profile(arc, {}, id, linear_grid(arc.meta.valid_radius),
                                {}, jobs);
        double bound = 0.0;
        for (const auto& s : prof.samples) bound = std::max(bound, s.value);
        double R2 = 2.0 * bound + 1.0;
        GeoImageProfile gip = geodesic_image_profile(arc, {}, R2, {}, jobs);
        bool ok = true;
        for (const auto& s : gip.samples)
            if (s.diam_proj > bound + 1e-9) ok = false;
        detail::add(rep, "bounded space: projections uniformly bounded past R2",
                    ok && !gip.samples.empty(),
                    "bound " + std::to_string(bound) + ", R2 " + std::to_string(R2) +
                        ", " + std::to_string(gip.samples.size()) + " segments");
    }
    return rep;
}

/// Abel machinery: the sigma sequences, step counts, the Abel equation on
/// the sequence, and the two-sided preorder fit between the log-space
/// identity profile and the sampled step count.
inline SuiteReport verify_abel(unsigned jobs = 1) {
    SuiteReport rep{"abel", {}};
    FunctionSpec half = FunctionSpec::parse("half");
    FunctionSpec twosqrt = FunctionSpec::parse("twosqrt");

    {
        AbelData d = sigma_sequence(half, 2.0, 6);
        bool ok = d.sigma.size() == 7;
        for (std::size_t i = 0; ok && i < d.sigma.size(); ++i)
            if (std::abs(d.sigma[i] - std::ldexp(1.0, static_cast<int>(i))) > 1e-6)
                ok = false;
        detail::add(rep, "sigma for rho=r/2, A=2 is the power-of-two sequence", ok,
                    "sigma(6)=" + std::to_string(d.sigma.back()));
        bool steps_ok = abel_steps(half, 2.0, 16.0) == 4;
        for (std::size_t i = 0; i + 1 < d.sigma.size(); ++i)
            if (abel_steps(half, 2.0, d.sigma[i]) != i) steps_ok = false;
        detail::add(rep, "step count inverts sigma for rho=r/2", steps_ok, "");
    }

    {
        AbelData d = sigma_sequence(twosqrt, 1.0, 6);
        bool ok = d.sigma.size() == 7;
        for (std::size_t i = 0; ok && i < d.sigma.size(); ++i)
            if (std::abs(d.sigma[i] - static_cast<double>(i * i)) > 1e-6) ok = false;
        detail::add(rep, "sigma for rho=2*sqrt(r)-1, A=1 is the squares sequence",
                    ok, "sigma(6)=" + std::to_string(d.sigma.back()));
        bool steps_ok = true;
        for (std::size_t i = 1; i + 1 < d.sigma.size(); ++i)
            if (abel_steps(twosqrt, 1.0, d.sigma[i]) != i) steps_ok = false;
        detail::add(rep, "step count inverts sigma for rho=2*sqrt(r)-1", steps_ok,
                    "");
    }

    {
        MarkedSpace ls = make_log_space(half, 2.0, 12);
        double r_hi = std::min(1024.0, ls.meta.valid_radius);
        std::vector<double> grid = geometric_grid(r_hi, 2.0);
        Profile p_id =
            contraction_profile(ls, {}, FunctionSpec::parse("id"), grid, {}, jobs);
        FunctionSamples prof = detail::profile_samples(p_id);
        FunctionSamples alpha;
        for (double r : grid)
            alpha.points.emplace_back(
                r, static_cast<double>(abel_steps(half, 2.0, std::max(r, 1.0))));
        auto fwd = preceq_fit(prof, alpha);
        auto bwd = preceq_fit(alpha, prof);
        detail::add(rep, "log-space profile and step count are preorder-equivalent",
                    fwd.has_value() && bwd.has_value(),
                    std::string(fwd ? "forward ok" : "forward missing") + ", " +
                        (bwd ? "backward ok" : "backward missing"));
    }
    return rep;
}

/// Stability of fitted classes under the epsilon choice, under a Hausdorff
/// perturbation of Y, and of divergence under parameter changes.
inline SuiteReport verify_robustness(unsigned jobs = 1) {
    SuiteReport rep{"robustness", {}};
    FunctionSpec id = FunctionSpec::parse("id");

    {
        // The log-vs-power separation needs a window of about two decades, so
        // the class-stability checks run on the larger instances.
        MarkedSpace neck = make_necklace(FunctionSpec::parse("ceilsqrt"), 4, 120);
        std::vector<double> grid = geometric_grid(240.0, 1.3, 8.0);
        std::vector<GrowthClass> classes;
        std::string detail_s;
        for (double eps : {0.0, 1.0, 2.0}) {
            Profile prof = contraction_profile(neck, {eps}, id, grid, {}, jobs);
            FitReport fit = detail::classify_profile(prof);
            classes.push_back(fit.cls);
            detail_s += "eps=" + std::to_string(int(eps)) + ": " +
                        to_string(fit.cls) + "  ";
        }
        bool ok = classes[0] == classes[1] && classes[1] == classes[2];
        detail::add(rep, "necklace class stable for eps in {0,1,2}", ok, detail_s);

        std::vector<double> pgrid = geometric_grid(240.0, 1.2, 8.0);
        Profile base = contraction_profile(neck, {}, id, pgrid, {}, jobs);
        MarkedSpace pert =
            detail::with_subspace(neck, subsample_point_set(neck.Y, 2));
        double hd = neck.graph.hausdorff_distance(neck.Y, pert.Y);
        Profile moved = contraction_profile(pert, {}, id, pgrid, {}, jobs);
        FitReport f0 = detail::classify_profile(base);
        FitReport f1 = detail::classify_profile(moved);
        detail::add(rep, "necklace class stable under Hausdorff-2 move of Y",
                    hd <= 2.0 && f0.cls == f1.cls,
                    "hausdorff " + std::to_string(hd) + ", " + to_string(f0.cls) +
                        " vs " + to_string(f1.cls));
    }

    {
        MarkedSpace ls = make_log_space(FunctionSpec::parse("half"), 2.0, 14);
        std::vector<double> grid = geometric_grid(4096.0, 2.0);
        std::vector<GrowthClass> classes;
        std::string detail_s;
        for (double eps : {0.0, 1.0, 2.0}) {
            Profile prof = contraction_profile(ls, {eps}, id, grid, {}, jobs);
            FitReport fit = detail::classify_profile(prof);
            classes.push_back(fit.cls);
            detail_s += "eps=" + std::to_string(int(eps)) + ": " +
                        to_string(fit.cls) + "  ";
        }
        bool ok = classes[0] == classes[1] && classes[1] == classes[2];
        detail::add(rep, "log-space class stable for eps in {0,1,2}", ok, detail_s);

        Profile base = contraction_profile(ls, {}, id, grid, {}, jobs);
        MarkedSpace pert = detail::with_subspace(ls, subsample_point_set(ls.Y, 2));
        double hd = ls.graph.hausdorff_distance(ls.Y, pert.Y);
        Profile moved = contraction_profile(pert, {}, id, grid, {}, jobs);
        FitReport f0 = detail::classify_profile(base);
        FitReport f1 = detail::classify_profile(moved);
        detail::add(rep, "log-space class stable under Hausdorff-2 move of Y",
                    hd <= 2.0 && f0.cls == f1.cls,
                    "hausdorff " + std::to_string(hd) + ", " + to_string(f0.cls) +
                        " vs " + to_string(f1.cls));
    }

    {
        MarkedSpace dn = make_divergence_necklace(FunctionSpec::parse("pow:2"), 1, 30);
        DivergenceParams a{1.0, 0.0, 1.0, 1.0};
        DivergenceParams b{1.0, 0.0, 0.5, 2.0};
        RobustnessResult rr = parameter_robustness_check(
            dn, a, b, geometric_grid(256.0, 2.0), default_s_grid(dn), jobs);
        detail::add(rep, "divergence equivalent across parameter sets",
                    rr.equivalent_on_window,
                    std::string(to_string(rr.fit1.cls)) + " vs " +
                        to_string(rr.fit2.cls));
    }
    return rep;
}

inline SuiteReport run_suite(const std::string& name, unsigned jobs = 1) {
    if (name == "theorem14") return verify_theorem14(jobs);
    if (name == "theorem15") return verify_theorem15(jobs);
    if (name == "git") return verify_git(jobs);
    if (name == "abel") return verify_abel(jobs);
    if (name == "robustness") return verify_robustness(jobs);
    throw Error(errc::invalid_params, "unknown suite '" + name + "'");
}

} // namespace metricgeo
