// Command-line front end: generate example spaces, run the analyzers, run
// the verification suites, and render CSV profiles as SVG.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage/input error, 3 window
// violation. Machine-readable error codes go to stderr as `error: <code>:
// <message>`.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metricgeo/document.hpp"
#include "metricgeo/plot.hpp"
#include "metricgeo/verify.hpp"

namespace mg = metricgeo;

namespace {

std::string default_out_dir() {
    const char* env = std::getenv("METRICGEO_OUT");
    return env && *env ? env : ".";
}

std::string resolve_out(const std::string& given, const std::string& fallback) {
    if (!given.empty()) return given;
    return default_out_dir() + "/" + fallback;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw mg::Error(mg::errc::invalid_params, "--range expects i_min:i_max");
    try {
        return {std::stoul(text.substr(0, colon)), std::stoul(text.substr(colon + 1))};
    } catch (...) {
        throw mg::Error(mg::errc::invalid_params, "bad --range '" + text + "'");
    }
}

void require(bool present, const std::string& flag) {
    if (!present)
        throw mg::Error(mg::errc::missing_param, "required flag " + flag);
}

std::vector<double> build_grid(const std::string& kind, double r_max, double step,
                               double factor) {
    if (kind == "linear") return mg::linear_grid(r_max, step);
    if (kind == "geometric") return mg::geometric_grid(r_max, factor);
    throw mg::Error(mg::errc::invalid_params, "--grid must be linear or geometric");
}

int run_generate(const std::string& family, const CLI::App& cmd,
                 const std::string& out) {
    auto get = [&](const std::string& flag) { return cmd.get_option(flag); };
    auto count = [&](const std::string& flag) { return get(flag)->count() > 0; };
    auto num = [&](const std::string& flag) {
        return std::stod(get(flag)->as<std::string>());
    };
    auto card = [&](const std::string& flag) {
        return static_cast<std::size_t>(get(flag)->as<unsigned long long>());
    };

    mg::MarkedSpace s = [&]() {
        if (family == "cycle_arc") {
            require(count("--n"), "--n");
            require(count("--arc-len"), "--arc-len");
            return mg::make_cycle_arc(card("--n"), card("--arc-len"));
        }
        if (family == "tree") {
            require(count("--branching"), "--branching");
            require(count("--depth"), "--depth");
            return mg::make_tree(card("--branching"), card("--depth"));
        }
        if (family == "grid_l1") {
            require(count("--width"), "--width");
            require(count("--height"), "--height");
            return mg::make_grid_l1(card("--width"), card("--height"));
        }
        if (family == "log_space") {
            require(count("--rho"), "--rho");
            require(count("--A"), "--A");
            require(count("--n"), "--n");
            return mg::make_log_space(
                mg::FunctionSpec::parse(get("--rho")->as<std::string>()),
                num("--A"), card("--n"));
        }
        if (family == "necklace") {
            require(count("--rho2"), "--rho2");
            require(count("--range"), "--range");
            auto [lo, hi] = parse_range(get("--range")->as<std::string>());
            return mg::make_necklace(
                mg::FunctionSpec::parse(get("--rho2")->as<std::string>()), lo, hi);
        }
        if (family == "divergence_necklace") {
            require(count("--f"), "--f");
            require(count("--range"), "--range");
            auto [lo, hi] = parse_range(get("--range")->as<std::string>());
            return mg::make_divergence_necklace(
                mg::FunctionSpec::parse(get("--f")->as<std::string>()), lo, hi);
        }
        if (family == "halfplane") {
            require(count("--extent"), "--extent");
            return mg::make_halfplane(card("--extent"));
        }
        throw mg::Error(mg::errc::invalid_params, "unknown family '" + family + "'");
    }();

    std::string path = resolve_out(out, family + ".json");
    mg::save_space(s, path);
    std::cout << "wrote " << path << " (" << s.graph.vertex_count()
              << " vertices)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"geodesic metric graph analyzers"};
    app.require_subcommand(1);
    unsigned jobs = 1;
    app.add_option("--jobs", jobs, "worker threads for sweeps")->capture_default_str();

    // generate
    auto* gen = app.add_subcommand("generate", "build an example space document");
    std::string family, gen_out, rho = "half", rho2, ffun, range_text;
    gen->add_option("--family", family,
                    "cycle_arc|tree|grid_l1|log_space|necklace|"
                    "divergence_necklace|halfplane")
        ->required();
    gen->add_option("--out", gen_out, "output path (default $METRICGEO_OUT)");
    gen->add_option("--n", "cycle length / log-space ray length");
    gen->add_option("--arc-len", "marked arc length");
    gen->add_option("--branching", "tree branching factor");
    gen->add_option("--depth", "tree depth");
    gen->add_option("--width", "grid width");
    gen->add_option("--height", "grid height");
    gen->add_option("--rho", "log-space rho (e.g. half)");
    gen->add_option("--A", "log-space base point A");
    gen->add_option("--rho2", "necklace bead-length function");
    gen->add_option("--f", "divergence-necklace bridge-length function");
    gen->add_option("--range", "index range i_min:i_max");
    gen->add_option("--extent", "halfplane extent");

    // profile
    auto* prof = app.add_subcommand("profile", "compute a profile CSV");
    std::string kind, space_path, prof_out, rho1_text = "id";
    std::string grid_kind = "linear";
    double epsilon = 0.0, r_max = -1.0, step = 1.0, factor = 2.0, C = 0.0;
    double dL = 1.0, dA = 0.0, dlambda = 0.5, dkappa = 2.0;
    std::vector<double> L_grid = {1.5, 2.0, 4.0};
    prof->add_option("--kind", kind, "contraction|divergence|morse|geodesic-image")
        ->required();
    prof->add_option("--space", space_path, "space document")->required();
    prof->add_option("--out", prof_out, "output CSV path");
    prof->add_option("--rho1", rho1_text, "contraction rho1")->capture_default_str();
    prof->add_option("--epsilon", epsilon, "projection epsilon")->capture_default_str();
    prof->add_option("--r-max", r_max, "largest radius (default valid_radius)");
    prof->add_option("--grid", grid_kind, "linear|geometric")->capture_default_str();
    prof->add_option("--step", step, "linear grid step")->capture_default_str();
    prof->add_option("--factor", factor, "geometric grid factor")->capture_default_str();
    prof->add_option("--C", C, "geodesic-image distance floor")->capture_default_str();
    prof->add_option("--L", dL, "divergence L")->capture_default_str();
    prof->add_option("--A", dA, "divergence A")->capture_default_str();
    prof->add_option("--lambda", dlambda, "divergence lambda")->capture_default_str();
    prof->add_option("--kappa", dkappa, "divergence kappa")->capture_default_str();
    prof->add_option("--L-grid", L_grid, "morse budget grid")->delimiter(',');

    // verify
    auto* ver = app.add_subcommand("verify", "run a verification suite");
    std::string suite, ver_out;
    ver->add_option("suite", suite, "theorem14|theorem15|git|abel|robustness")
        ->required();
    ver->add_option("--out", ver_out, "report JSON path (optional)");

    // plot
    auto* plt = app.add_subcommand("plot", "render a profile CSV as SVG");
    std::string csv_path, svg_out;
    plt->add_option("csv", csv_path, "input CSV")->required();
    plt->add_option("--out", svg_out, "output SVG path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << mg::errc::bad_input << ": " << e.what() << "\n";
        return 2;
    }

    try {
        if (gen->parsed()) return run_generate(family, *gen, gen_out);

        if (prof->parsed()) {
            mg::MarkedSpace s = mg::load_space(space_path);
            if (r_max < 0.0) r_max = s.meta.valid_radius;
            std::string out_path = resolve_out(prof_out, kind + ".csv");
            if (kind == "contraction") {
                mg::Profile p = mg::contraction_profile(
                    s, {epsilon}, mg::FunctionSpec::parse(rho1_text),
                    build_grid(grid_kind, r_max, step, factor), {}, jobs);
                mg::write_text_file(out_path, mg::profile_to_csv(p));
            } else if (kind == "divergence") {
                mg::DivergenceParams dp{dL, dA, dlambda, dkappa};
                mg::DivergenceProfile p = mg::divergence_profile(
                    s, dp, build_grid(grid_kind, r_max, step, factor),
                    mg::default_s_grid(s), jobs);
                mg::write_text_file(out_path, mg::divergence_to_csv(p));
            } else if (kind == "morse") {
                mg::MorseProfileResult p = mg::morse_profile(s, L_grid, jobs);
                mg::write_text_file(out_path, mg::morse_to_csv(p));
            } else if (kind == "geodesic-image") {
                mg::GeoImageProfile p =
                    mg::geodesic_image_profile(s, {epsilon}, C, {}, jobs);
                mg::write_text_file(out_path, mg::geo_image_to_csv(p));
            } else {
                throw mg::Error(mg::errc::invalid_params,
                                "unknown profile kind '" + kind + "'");
            }
            std::cout << "wrote " << out_path << "\n";
            return 0;
        }

        if (ver->parsed()) {
            mg::SuiteReport rep = mg::run_suite(suite, jobs);
            for (const mg::CheckResult& c : rep.checks)
                std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
                          << (c.detail.empty() ? "" : "  (" + c.detail + ")")
                          << "\n";
            if (!ver_out.empty() || std::getenv("METRICGEO_OUT")) {
                mg::Json j;
                j["suite"] = rep.suite;
                mg::RunConfig rc;
                rc.jobs = jobs;
                rc.out_dir = default_out_dir();
                j["run_config"] = rc.to_json();
                mg::Json checks = mg::Json::array();
                for (const mg::CheckResult& c : rep.checks) {
                    mg::Json cj;
                    cj["name"] = c.name;
                    cj["pass"] = c.pass;
                    cj["detail"] = c.detail;
                    checks.push_back(cj);
                }
                j["checks"] = checks;
                j["all_pass"] = rep.all_pass();
                mg::write_text_file(resolve_out(ver_out, suite + "_report.json"),
                                    j.dump(2) + "\n");
            }
            return rep.all_pass() ? 0 : 1;
        }

        if (plt->parsed()) {
            mg::PlotData d = mg::parse_profile_csv(mg::read_text_file(csv_path));
            std::string out_path = resolve_out(svg_out, "plot.svg");
            mg::write_text_file(out_path, mg::render_plot_svg(d, csv_path));
            std::cout << "wrote " << out_path << "\n";
            return 0;
        }
    } catch (const mg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == mg::errc::window_violation ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << mg::errc::bad_input << ": " << e.what() << "\n";
        return 2;
    }
    return 2;
}
