// Command-line front end: complex construction, Betti curves, exact
// Wasserstein distances, membership queries, and verification suites.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smt/homology.hpp"
#include "smt/homotopy.hpp"
#include "smt/io.hpp"
#include "smt/suites.hpp"
#include "smt/thickening.hpp"
#include "smt/wasserstein.hpp"

namespace {

using nlohmann::json;

double parse_scale(const std::string& token) {
    return smt::detail::parse_extended(token, 1, 1);
}

smt::ScaleConvention parse_convention(const std::string& name) {
    if (name == "closed") return smt::ScaleConvention::Closed;
    if (name == "open") return smt::ScaleConvention::Open;
    throw std::domain_error("unknown convention: " + name + " (expected closed or open)");
}

struct ConstructionChoice {
    smt::Construction construction;
    smt::ScaleConvention convention;
};

ConstructionChoice parse_construction(const std::string& name, const std::string& convention) {
    smt::ScaleConvention conv = parse_convention(convention);
    if (name == "vr") return {smt::Construction::VietorisRips, conv};
    if (name == "vr-strict") return {smt::Construction::VietorisRips, smt::ScaleConvention::Open};
    if (name == "cech") return {smt::Construction::Cech, conv};
    throw std::domain_error("unknown construction: " + name +
                            " (expected vr, vr-strict, cech)");
}

/// "a:step:b" (inclusive, half-open guard on rounding) or a comma list.
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::string token;
        std::stringstream ss(spec);
        while (std::getline(ss, token, ':')) parts.push_back(token);
        if (parts.size() != 3)
            throw std::domain_error("grid spec must be start:step:stop, got " + spec);
        double start = parse_scale(parts[0]), step = parse_scale(parts[1]),
               stop = parse_scale(parts[2]);
        if (step <= 0.0) throw std::domain_error("grid step must be positive");
        for (double r = start; r <= stop + 1e-12; r += step) out.push_back(r);
        return out;
    }
    std::string token;
    std::stringstream ss(spec);
    while (std::getline(ss, token, ',')) out.push_back(parse_scale(token));
    if (out.empty()) throw std::domain_error("empty grid spec");
    return out;
}

json suite_result_to_json(const smt::SuiteResult& res) {
    return json{{"suite", res.name},
                {"pass", res.pass},
                {"checks", res.checks},
                {"failures", res.failures},
                {"notes", res.notes}};
}

struct VerifyOptions {
    std::string suite;
    std::string input, input2;
    std::string metric;
    std::string basepoint, basepoint2;
    std::string r = "0";
    std::string convention = "closed";
    int samples = 100;
    std::uint64_t seed = 0;
};

json run_verify_suite(const VerifyOptions& opt, bool& pass) {
    using smt::Construction;
    if (opt.suite == "product-iso") {
        auto res = smt::suite_product_iso(opt.seed, Construction::VietorisRips);
        pass = res.pass;
        return suite_result_to_json(res);
    }
    if (opt.suite == "cech-product-iso") {
        auto res = smt::suite_product_iso(opt.seed, Construction::Cech);
        pass = res.pass;
        return suite_result_to_json(res);
    }
    if (opt.suite == "wedge-betti") {
        auto res = smt::suite_wedge_betti(opt.seed);
        pass = res.pass;
        return suite_result_to_json(res);
    }
    if (opt.suite == "wedge-strict-containment") {
        auto res = smt::suite_wedge_strict_containment();
        pass = res.pass;
        return suite_result_to_json(res);
    }
    if (opt.suite == "coproduct") {
        auto res = smt::suite_coproduct(opt.seed);
        pass = res.pass;
        return suite_result_to_json(res);
    }
    if (opt.suite == "metric-axioms") {
        auto res = smt::suite_metric_axioms(opt.seed);
        auto iso = smt::suite_delta_isometry(opt.seed);
        pass = res.pass && iso.pass;
        return json{{"suite", "metric-axioms"},
                    {"pass", pass},
                    {"parts", json::array({suite_result_to_json(res), suite_result_to_json(iso)})}};
    }
    if (opt.suite == "homotopy-product") {
        auto res = smt::suite_homotopy_product(opt.seed, opt.samples);
        pass = res.pass;
        return suite_result_to_json(res);
    }
    if (opt.suite == "homotopy-wedge") {
        auto res = smt::suite_homotopy_wedge(opt.seed, opt.samples);
        pass = res.pass;
        return suite_result_to_json(res);
    }
    if (opt.suite == "product") {
        if (opt.input.empty() || opt.input2.empty())
            throw std::domain_error("verify product requires --input and --input2");
        auto x = std::make_shared<smt::MetricSpace>(smt::read_space_file(opt.input, opt.metric));
        auto y = std::make_shared<smt::MetricSpace>(smt::read_space_file(opt.input2, opt.metric));
        smt::ScaleParameter s(parse_scale(opt.r), parse_convention(opt.convention));
        smt::Thickening joint =
            smt::thickening_product(smt::vietoris_rips(x, s), smt::vietoris_rips(y, s));
        smt::HomotopyReport report =
            smt::verify_product_deformation(joint, opt.samples, opt.seed);
        pass = report.pass();
        return smt::homotopy_report_to_json(report);
    }
    if (opt.suite == "wedge") {
        if (opt.input.empty() || opt.input2.empty())
            throw std::domain_error("verify wedge requires --input and --input2");
        auto x = std::make_shared<smt::MetricSpace>(smt::read_space_file(opt.input, opt.metric));
        auto y = std::make_shared<smt::MetricSpace>(smt::read_space_file(opt.input2, opt.metric));
        std::string xbase = opt.basepoint.empty() ? x->label(0) : opt.basepoint;
        std::string ybase = opt.basepoint2.empty() ? y->label(0) : opt.basepoint2;
        smt::PointedMetricSpace glued_space =
            smt::wedge(smt::PointedMetricSpace(*x, xbase), smt::PointedMetricSpace(*y, ybase));
        smt::ScaleParameter s(parse_scale(opt.r), parse_convention(opt.convention));
        smt::Thickening m = smt::vietoris_rips(x, s);
        smt::Thickening n = smt::vietoris_rips(y, s);
        smt::Thickening glued = smt::thickening_wedge(m, xbase, n, ybase);
        smt::Thickening v = smt::vietoris_rips(
            std::make_shared<smt::MetricSpace>(glued_space.space), s);
        smt::HomotopyReport report =
            smt::verify_wedge_deformation(v, glued, opt.samples, opt.seed);
        pass = report.pass();
        return smt::homotopy_report_to_json(report);
    }
    throw std::domain_error(
        "unknown suite: " + opt.suite +
        " (expected product-iso, cech-product-iso, wedge-betti, wedge-strict-containment, "
        "coproduct, metric-axioms, homotopy-product, homotopy-wedge, product, wedge)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vietoris-Rips and Cech complexes, metric thickenings, exact Wasserstein "
                 "distances, and verification suites"};
    app.require_subcommand(1);

    // complex
    auto* cmd_complex = app.add_subcommand("complex", "build a VR or Cech complex from a space");
    std::string cx_input, cx_metric, cx_construction = "vr", cx_convention = "closed",
                cx_r = "0";
    cmd_complex->add_option("--input", cx_input, "distance-matrix CSV (or point cloud with --metric)")
        ->required();
    cmd_complex->add_option("--metric", cx_metric, "point-cloud metric: l1, l2, linf");
    cmd_complex->add_option("--construction", cx_construction, "vr, vr-strict, cech");
    cmd_complex->add_option("--convention", cx_convention, "closed (<=) or open (<)");
    cmd_complex->add_option("--r", cx_r, "scale parameter (inf allowed)");

    // betti
    auto* cmd_betti = app.add_subcommand("betti", "Betti vectors across a scale grid");
    std::string bt_input, bt_metric, bt_construction = "vr", bt_convention = "closed",
                bt_grid = "0", bt_format = "json";
    int bt_dim_cap = 3;
    cmd_betti->add_option("--input", bt_input, "space CSV")->required();
    cmd_betti->add_option("--metric", bt_metric, "point-cloud metric: l1, l2, linf");
    cmd_betti->add_option("--construction", bt_construction, "vr, vr-strict, cech");
    cmd_betti->add_option("--convention", bt_convention, "closed or open");
    cmd_betti->add_option("--r-grid", bt_grid, "start:step:stop or comma list");
    cmd_betti->add_option("--dim-cap", bt_dim_cap, "largest homology dimension");
    cmd_betti->add_option("--format", bt_format, "json or csv");

    // wasserstein
    auto* cmd_w = app.add_subcommand("wasserstein", "exact p-Wasserstein distance and plan");
    std::string w_space, w_metric, w_mu, w_nu;
    double w_p = 1.0;
    cmd_w->add_option("--space", w_space, "ambient space CSV")->required();
    cmd_w->add_option("--metric", w_metric, "point-cloud metric: l1, l2, linf");
    cmd_w->add_option("--mu", w_mu, "first measure JSON")->required();
    cmd_w->add_option("--nu", w_nu, "second measure JSON")->required();
    cmd_w->add_option("--p", w_p, "exponent p >= 1");

    // contains
    auto* cmd_contains = app.add_subcommand("contains", "measure membership in a thickening");
    std::string ct_input, ct_metric, ct_construction = "vr", ct_convention = "closed",
                ct_r = "0", ct_measure, ct_complex;
    cmd_contains->add_option("--input", ct_input, "space CSV")->required();
    cmd_contains->add_option("--metric", ct_metric, "point-cloud metric: l1, l2, linf");
    cmd_contains->add_option("--construction", ct_construction, "vr, vr-strict, cech");
    cmd_contains->add_option("--convention", ct_convention, "closed or open");
    cmd_contains->add_option("--r", ct_r, "scale parameter");
    cmd_contains->add_option("--complex", ct_complex,
                             "complex JSON overriding the construction flags");
    cmd_contains->add_option("--measure", ct_measure, "measure JSON")->required();

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "run a verification suite");
    VerifyOptions vo;
    cmd_verify->add_option("suite", vo.suite, "suite name")->required();
    cmd_verify->add_option("--input", vo.input, "space CSV (product/wedge suites)");
    cmd_verify->add_option("--input2", vo.input2, "second space CSV");
    cmd_verify->add_option("--metric", vo.metric, "point-cloud metric: l1, l2, linf");
    cmd_verify->add_option("--basepoint", vo.basepoint, "basepoint of the first space");
    cmd_verify->add_option("--basepoint2", vo.basepoint2, "basepoint of the second space");
    cmd_verify->add_option("--r", vo.r, "scale parameter");
    cmd_verify->add_option("--convention", vo.convention, "closed or open");
    cmd_verify->add_option("--samples", vo.samples, "harness sample count");
    cmd_verify->add_option("--seed", vo.seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(cmd_complex)) {
            ConstructionChoice choice = parse_construction(cx_construction, cx_convention);
            smt::MetricSpace space = smt::read_space_file(cx_input, cx_metric);
            smt::ScaleParameter s(parse_scale(cx_r), choice.convention);
            smt::SimplicialComplex k = choice.construction == smt::Construction::VietorisRips
                                           ? smt::vietoris_rips_complex(space, s)
                                           : smt::cech_complex(space, s);
            std::cout << smt::complex_to_json(k).dump(2) << "\n";
            return 0;
        }

        if (app.got_subcommand(cmd_betti)) {
            ConstructionChoice choice = parse_construction(bt_construction, bt_convention);
            smt::MetricSpace space = smt::read_space_file(bt_input, bt_metric);
            auto table = smt::betti_curve(space, choice.construction, choice.convention,
                                          parse_grid(bt_grid), bt_dim_cap);
            if (bt_format == "csv") std::cout << smt::betti_table_to_csv(table, bt_dim_cap);
            else std::cout << smt::betti_table_to_json(table, bt_dim_cap).dump(2) << "\n";
            return 0;
        }

        if (app.got_subcommand(cmd_w)) {
            auto space = std::make_shared<smt::MetricSpace>(smt::read_space_file(w_space, w_metric));
            smt::FiniteMeasure mu = smt::read_measure_file(w_mu, space);
            smt::FiniteMeasure nu = smt::read_measure_file(w_nu, space);
            smt::WassersteinResult result = smt::wasserstein(mu, nu, {w_p, 1e-9});
            std::cout << smt::wasserstein_to_json(result, w_p).dump(2) << "\n";
            return 0;
        }

        if (app.got_subcommand(cmd_contains)) {
            auto space = std::make_shared<smt::MetricSpace>(
                smt::read_space_file(ct_input, ct_metric));
            smt::ScaleParameter s(parse_scale(ct_r), parse_convention(ct_convention));
            smt::Thickening t = [&]() {
                if (!ct_complex.empty()) {
                    std::ifstream in(ct_complex);
                    if (!in) throw std::runtime_error("cannot open complex file: " + ct_complex);
                    json j;
                    in >> j;
                    return smt::Thickening(space, smt::complex_from_json(j));
                }
                ConstructionChoice choice = parse_construction(ct_construction, ct_convention);
                return choice.construction == smt::Construction::VietorisRips
                           ? smt::vietoris_rips(space, s)
                           : smt::cech(space, s);
            }();
            smt::FiniteMeasure mu = smt::read_measure_file(ct_measure, space);
            smt::ContainsResult c = smt::contains(t, mu);
            json out{{"contains", c.ok}};
            if (!c.ok) out["failing_face"] = c.face;
            std::cout << out.dump(2) << "\n";
            return 0;
        }

        if (app.got_subcommand(cmd_verify)) {
            auto start = std::chrono::steady_clock::now();
            bool pass = false;
            json results = run_verify_suite(vo, pass);
            auto stop = std::chrono::steady_clock::now();
            json inputs{{"flags",
                         {{"suite", vo.suite},
                          {"seed", vo.seed},
                          {"samples", vo.samples},
                          {"r", vo.r},
                          {"convention", vo.convention}}}};
            json files = json::object();
            if (!vo.input.empty()) files[vo.input] = smt::digest_file(vo.input);
            if (!vo.input2.empty()) files[vo.input2] = smt::digest_file(vo.input2);
            inputs["files"] = files;
            json report{{"command", "verify"},
                        {"inputs", inputs},
                        {"results", results},
                        {"pass", pass},
                        {"timing_seconds",
                         std::chrono::duration<double>(stop - start).count()}};
            std::cout << report.dump(2) << "\n";
            return pass ? 0 : 1;
        }
    } catch (const smt::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
