// Command-line front end: gallery lookup, characteristic runs, parameterisation
// builders, verification pipelines and report rendering.
//
// Exit codes: 0 all checks pass, 1 at least one check failed, 2 usage/config error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ilg/along.hpp"
#include "ilg/broad.hpp"
#include "ilg/extend.hpp"
#include "ilg/field.hpp"
#include "ilg/flow.hpp"
#include "ilg/gallery.hpp"
#include "ilg/mollify.hpp"
#include "ilg/param.hpp"
#include "ilg/runner.hpp"
#include "ilg/svg.hpp"

namespace {

int cmd_gallery(const std::string& action, const std::string& name) {
    if (action == "list") {
        for (const auto& n : ilg::gallery_names()) std::cout << n << "\n";
        return 0;
    }
    const ilg::GalleryInstance gi = ilg::gallery(name);
    std::cout << "name:    " << gi.name << "\n";
    std::cout << "phi:     " << gi.phi.text() << "\n";
    std::cout << "w:       " << gi.w.text() << "\n";
    std::printf("domain:  (%g, %g) x (%g, %g)\n", gi.domain.z_lo, gi.domain.z_hi,
                gi.domain.t_lo, gi.domain.t_hi);
    std::printf("||w||:   %g\n", gi.w_sup);
    std::cout << "notes:   " << gi.notes << "\n";
    if (!gi.markers.empty()) {
        std::cout << "nodes:  ";
        for (std::size_t i = 0; i < gi.markers.size() && i < 8; ++i)
            std::printf(" %.5f", gi.markers[i]);
        std::cout << (gi.markers.size() > 8 ? " ...\n" : "\n");
    }
    return 0;
}

ilg::RunConfig load_config(const std::string& config_path,
                           const std::string& instance,
                           std::uint64_t seed, bool seed_set) {
    ilg::RunConfig cfg;
    if (!config_path.empty()) cfg = ilg::RunConfig::from_file(config_path);
    if (!instance.empty()) cfg.instance = instance;
    if (seed_set) cfg.seed = seed;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"characteristic flows and monotone parameterisations for the planar "
                 "balance law phi_z + (phi^2/2)_t = w"};
    app.require_subcommand(1);

    // gallery list | gallery show <name>
    auto* gal = app.add_subcommand("gallery", "list or show the named instances");
    std::string gal_action = "list", gal_name;
    gal->add_option("action", gal_action, "list | show")->required();
    gal->add_option("name", gal_name, "instance name for 'show'");

    // characteristics
    auto* chart = app.add_subcommand("characteristics", "integrate characteristic curves");
    std::string ch_instance = "ex1", ch_side = "merged", ch_out = "curve.csv", ch_svg;
    double ch_s = 0.5, ch_t = 0.5, ch_h = 1e-3;
    int ch_fan = 0;
    chart->add_option("--instance", ch_instance, "gallery instance");
    chart->add_option("--side", ch_side, "generic | minimal | maximal | merged");
    chart->add_option("--from-s", ch_s, "anchor abscissa");
    chart->add_option("--from-t", ch_t, "anchor ordinate");
    chart->add_option("--step", ch_h, "RK4 step");
    chart->add_option("--out", ch_out, "curve CSV path");
    chart->add_option("--fan-svg", ch_svg, "also emit a fan SVG here");
    chart->add_option("--fan", ch_fan, "number of extra fan anchors for the SVG");

    // param build|extend|mollify
    auto* par = app.add_subcommand("param", "build, extend or mollify a parameterisation");
    std::string par_action, par_instance = "ex1", par_out = "param.csv";
    int par_res = 48, par_depth = 3, par_tau = 257;
    double par_eps = 0.05, par_h = 2e-3;
    par->add_option("action", par_action, "build | extend | mollify")->required();
    par->add_option("--instance", par_instance, "gallery instance");
    par->add_option("--resolution", par_res, "anchor lattice resolution (build/mollify)");
    par->add_option("--tau-samples", par_tau, "launch count for the minimal family (extend)");
    par->add_option("--depth", par_depth, "extension depth (extend)");
    par->add_option("--eps", par_eps, "mollification width (mollify)");
    par->add_option("--step", par_h, "RK4 step");
    par->add_option("--out", par_out, "param CSV path");
    std::string par_trace;
    par->add_option("--trace", par_trace, "extension trace JSON path (extend)");

    // verify / report
    auto* ver = app.add_subcommand("verify", "run checks and write a report");
    std::string ver_config, ver_instance, ver_checks, ver_out;
    std::uint64_t ver_seed = 7;
    bool ver_seed_set = false;
    ver->add_option("--config", ver_config, "key=value config file");
    ver->add_option("--instance", ver_instance, "gallery instance (overrides config)");
    ver->add_option("--checks", ver_checks, "comma list, default all");
    ver->add_option("--out-dir", ver_out, "artifact directory (overrides config)");
    ver->add_option("--seed", ver_seed, "seed (overrides config)")
        ->each([&](const std::string&) { ver_seed_set = true; });

    auto* repc = app.add_subcommand("report", "render a report JSON and set the exit code");
    std::string rep_path;
    repc->add_option("file", rep_path, "report.json path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gal->parsed()) {
            if (gal_action == "show" && gal_name.empty())
                throw ilg::config_error("gallery show needs a name");
            if (gal_action != "list" && gal_action != "show")
                throw ilg::config_error("gallery action must be list or show");
            return cmd_gallery(gal_action, gal_name);
        }

        if (chart->parsed()) {
            const ilg::GalleryInstance gi = ilg::gallery(ch_instance);
            ilg::FlowOptions opts;
            opts.h = ch_h;
            double pad = 0;
            const ilg::ScalarField phi_pad =
                ilg::detail::pad_field(gi.phi, gi.domain, opts.eps0, pad);
            const ilg::Domain work = ilg::detail::work_domain(gi.domain, pad);
            auto build = [&](double s0, double t0) {
                if (ch_side == "generic")
                    return ilg::integrate(phi_pad, work, s0, t0, gi.domain.z_lo,
                                          gi.domain.z_hi, opts);
                if (ch_side == "minimal")
                    return ilg::extremal(phi_pad, work, s0, t0, ilg::Selection::Minimal,
                                         gi.domain.z_lo, gi.domain.z_hi, opts);
                if (ch_side == "maximal")
                    return ilg::extremal(phi_pad, work, s0, t0, ilg::Selection::Maximal,
                                         gi.domain.z_lo, gi.domain.z_hi, opts);
                if (ch_side == "merged")
                    return ilg::merged(phi_pad, work, s0, t0, gi.domain.z_lo,
                                       gi.domain.z_hi, opts);
                throw ilg::config_error("side must be generic|minimal|maximal|merged");
            };
            ilg::Characteristic c = build(ch_s, ch_t);
            c.to_csv(ch_out);
            std::printf("wrote %s (%zu samples, selection %s)\n", ch_out.c_str(), c.size(),
                        ilg::selection_name(c.selection));
            if (!ch_svg.empty()) {
                std::vector<ilg::Characteristic> fan{c};
                for (int k = 0; k < ch_fan; ++k) {
                    const double tb = gi.domain.t_lo +
                                      gi.domain.height() * (k + 0.5) / ch_fan;
                    fan.push_back(build(gi.domain.z_lo, tb));
                }
                const std::size_t n = ilg::emit_fan_svg(fan, gi.domain, ch_svg);
                std::printf("wrote %s (%zu bytes)\n", ch_svg.c_str(), n);
            }
            return 0;
        }

        if (par->parsed()) {
            const ilg::GalleryInstance gi = ilg::gallery(par_instance);
            ilg::FlowOptions opts;
            opts.h = par_h;
            if (par_action == "build") {
                ilg::LagrangianParam p = ilg::build_full_param(gi.phi, gi.domain, par_res, opts);
                p.to_csv(par_out);
                std::printf("wrote %s: %zu curves, kind %s, max section gap %.3g\n",
                            par_out.c_str(), p.columns(),
                            p.kind == ilg::LagrangianParam::Kind::Full ? "full" : "partial",
                            p.max_section_gap);
            } else if (par_action == "extend") {
                opts.tol = 2e-3;
                opts.eps_levels = 12;
                ilg::LagrangianParam p0 =
                    ilg::build_minimal_param(gi.phi, gi.domain, par_tau, opts);
                ilg::LagrangianParam p = ilg::extend_param(p0, par_depth, opts);
                p.to_csv(par_out);
                std::printf("wrote %s: %zu -> %zu curves, depth %d\n", par_out.c_str(),
                            p0.columns(), p.columns(), par_depth);
                if (p.trace) {
                    for (const auto& st : p.trace->steps)
                        std::printf("  level %d section %.6g: %zu gaps, growth %.6g "
                                    "(bound %.6g)\n",
                                    st.n, st.s, st.gaps.size(), st.growth,
                                    std::pow(2.0, 1 - 2 * st.n));
                    if (!par_trace.empty()) {
                        ilg::trace_to_json_file(*p.trace, par_trace);
                        std::printf("wrote %s\n", par_trace.c_str());
                    }
                }
            } else if (par_action == "mollify") {
                ilg::LagrangianParam p = ilg::build_full_param(gi.phi, gi.domain, par_res, opts);
                const ilg::MollifyResult m = ilg::mollify_param(p, par_eps);
                m.chi_eps.to_csv(par_out);
                std::printf("wrote %s: eps %.4g, L1 gap %.6g\n", par_out.c_str(), par_eps,
                            m.l1_gap);
            } else {
                throw ilg::config_error("param action must be build, extend, or mollify");
            }
            return 0;
        }

        if (ver->parsed()) {
            ilg::RunConfig cfg = load_config(ver_config, ver_instance, ver_seed, ver_seed_set);
            if (!ver_checks.empty()) {
                cfg.checks_explicit = true;
                cfg.checks.clear();
                std::stringstream ss(ver_checks);
                std::string tok;
                while (std::getline(ss, tok, ',')) cfg.checks.push_back(tok);
            }
            if (!ver_out.empty()) cfg.out_dir = ver_out;
            const ilg::VerificationReport rep = ilg::run(cfg);
            for (const auto& c : rep.checks)
                std::printf("[%s] %-28s measured %.6g  %s bound %.6g (tol %.2g)\n",
                            c.pass ? "pass" : "FAIL", c.name.c_str(), c.measured,
                            c.op.c_str(), c.bound, c.tolerance);
            std::printf("report: %s/report.json\n", cfg.out_dir.c_str());
            return rep.all_pass() ? 0 : 1;
        }

        if (repc->parsed()) {
            std::ifstream in(rep_path);
            if (!in) throw ilg::config_error("cannot open report: " + rep_path);
            nlohmann::json j;
            in >> j;
            bool ok = true;
            for (const auto& c : j.at("checks")) {
                const bool pass = c.at("verdict") == "pass";
                ok = ok && pass;
                std::printf("[%s] %-28s measured %.6g %s bound %.6g\n",
                            pass ? "pass" : "FAIL",
                            c.at("name").get<std::string>().c_str(),
                            c.at("measured").get<double>(),
                            c.at("op").get<std::string>().c_str(),
                            c.at("bound").get<double>());
            }
            std::printf("%s\n", ok ? "all checks passed" : "some checks FAILED");
            return ok ? 0 : 1;
        }
    } catch (const ilg::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ilg::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
