#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ilg/along.hpp"
#include "ilg/broad.hpp"
#include "ilg/bump.hpp"
#include "ilg/domain.hpp"
#include "ilg/field.hpp"
#include "ilg/flow.hpp"
#include "ilg/gallery.hpp"
#include "ilg/heisenberg.hpp"
#include "ilg/mollify.hpp"
#include "ilg/param.hpp"
#include "ilg/report.hpp"
#include "ilg/residual.hpp"
#include "ilg/rng.hpp"
#include "ilg/svg.hpp"

namespace ilg {

/** Key-value run configuration (file syntax: `key = value`, '#' comments), resolved
 *  against a gallery instance or user-supplied fields. */
struct RunConfig {
    std::string instance;                       // gallery name, or empty when fields given
    std::string phi_expr, w_expr;               // analytic user fields
    std::string phi_csv, w_csv;                 // sampled user fields
    std::optional<Domain> domain;               // required for expression fields
    std::vector<std::string> checks;            // subset of all_checks(), or {"all"}
    bool checks_explicit = false;               // set when a config/flag provided the list
    std::uint64_t seed = 7;
    int quad_res = 129;
    int bump_count = 10;
    int curve_count = 20;
    int param_resolution = 48;
    int broad_stride = 16;
    double residual_tol = 5e-3;
    double lipschitz_slack = 0.01;
    double dafermos_tol = 1e-4;
    double dafermos_eps = 0.01;
    double broad_tol = 2e-2;
    double w_sup_override = -1;                 // for user fields (else estimated)
    FlowOptions flow;
    std::string out_dir = "out";

    static std::vector<std::string> all_checks() {
        return {"residual", "lipschitz", "dafermos", "holder", "intrinsic",
                "broad", "param", "mollify"};
    }

    static RunConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open config file: " + path);
        RunConfig c;
        std::map<std::string, std::string> kv;
        std::string line;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                const auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
        c.apply(kv);
        return c;
    }

    void apply(const std::map<std::string, std::string>& kv) {
        auto get = [&](const char* k) -> std::optional<std::string> {
            auto it = kv.find(k);
            if (it == kv.end()) return std::nullopt;
            return it->second;
        };
        if (auto v = get("instance")) instance = *v;
        if (auto v = get("phi_expr")) phi_expr = *v;
        if (auto v = get("w_expr")) w_expr = *v;
        if (auto v = get("phi_csv")) phi_csv = *v;
        if (auto v = get("w_csv")) w_csv = *v;
        if (auto v = get("checks")) {
            checks_explicit = true;
            checks.clear();
            std::stringstream ss(*v);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
                if (!tok.empty()) checks.push_back(tok);
            }
        }
        if (auto v = get("seed")) seed = std::stoull(*v);
        if (auto v = get("quad_res")) quad_res = std::stoi(*v);
        if (auto v = get("bump_count")) bump_count = std::stoi(*v);
        if (auto v = get("curve_count")) curve_count = std::stoi(*v);
        if (auto v = get("param_resolution")) param_resolution = std::stoi(*v);
        if (auto v = get("residual_tol")) residual_tol = std::stod(*v);
        if (auto v = get("dafermos_tol")) dafermos_tol = std::stod(*v);
        if (auto v = get("dafermos_eps")) dafermos_eps = std::stod(*v);
        if (auto v = get("broad_tol")) broad_tol = std::stod(*v);
        if (auto v = get("w_sup")) w_sup_override = std::stod(*v);
        if (auto v = get("flow_h")) flow.h = std::stod(*v);
        if (auto v = get("flow_eps0")) flow.eps0 = std::stod(*v);
        if (auto v = get("flow_eps_levels")) flow.eps_levels = std::stoi(*v);
        if (auto v = get("flow_tol")) flow.tol = std::stod(*v);
        if (auto v = get("out_dir")) out_dir = *v;
        auto want_dom = [&](const char* a, const char* b, const char* c2, const char* d) {
            return kv.count(a) && kv.count(b) && kv.count(c2) && kv.count(d);
        };
        if (want_dom("z_lo", "z_hi", "t_lo", "t_hi"))
            domain = Domain(std::stod(kv.at("z_lo")), std::stod(kv.at("z_hi")),
                            std::stod(kv.at("t_lo")), std::stod(kv.at("t_hi")));
    }

    struct Resolved {
        ScalarField phi, w;
        Domain dom;
        double w_sup = 0;
        std::string label;
    };

    Resolved resolve() const {
        Resolved r;
        if (!instance.empty()) {
            GalleryInstance gi = gallery(instance);
            r.phi = gi.phi;
            r.w = gi.w;
            r.dom = gi.domain;
            r.w_sup = gi.w_sup;
            r.label = gi.name;
            return r;
        }
        if (!phi_csv.empty()) {
            r.phi = ScalarField::from_csv(phi_csv);
            r.dom = *r.phi.sampled_domain();
        } else if (!phi_expr.empty()) {
            if (!domain) throw config_error("expression fields need z_lo/z_hi/t_lo/t_hi");
            r.phi = ScalarField::analytic(phi_expr);
            r.dom = *domain;
        } else {
            throw config_error("config needs an instance, phi_expr, or phi_csv");
        }
        if (!w_csv.empty()) r.w = ScalarField::from_csv(w_csv);
        else if (!w_expr.empty()) r.w = ScalarField::analytic(w_expr);
        else throw config_error("config needs w_expr or w_csv");
        r.w_sup = w_sup_override > 0 ? w_sup_override : sup_norm(r.w, r.dom, 129);
        r.label = "custom";
        return r;
    }
};

namespace detail {

inline Characteristic seeded_merged_curve(const ScalarField& phi, const Domain& dom, Rng& rng,
                                          const FlowOptions& opts) {
    const double m = 0.05;
    const double sb = rng.uniform(dom.z_lo + m * dom.width(), dom.z_hi - m * dom.width());
    const double tb = rng.uniform(dom.t_lo + m * dom.height(), dom.t_hi - m * dom.height());
    return merged(phi, dom, sb, tb, dom.z_lo, dom.z_hi, opts);
}

}  // namespace detail

/** Execute the configured checks, write report JSON, curve CSVs and the fan SVG into
 *  out_dir, and return the report.  Deterministic given (config, seed). */
inline VerificationReport run(const RunConfig& cfg) {
    const RunConfig::Resolved R = cfg.resolve();
    std::vector<std::string> want = cfg.checks;
    if (want.size() == 1 && want[0] == "all") want = RunConfig::all_checks();
    else if (want.empty() && !cfg.checks_explicit) want = RunConfig::all_checks();
    for (const auto& c : want) {
        const auto all = RunConfig::all_checks();
        if (std::find(all.begin(), all.end(), c) == all.end())
            throw config_error("unknown check '" + c + "'");
    }
    auto wanted = [&](const char* name) {
        return std::find(want.begin(), want.end(), name) != want.end();
    };

    std::filesystem::create_directories(cfg.out_dir);
    VerificationReport rep;
    rep.instance = R.label;
    rep.seed = cfg.seed;

    // padded copy for the pointwise probes (whose windows need the full range)
    double pad = 0;
    const ScalarField phi_pad = detail::pad_field(R.phi, R.dom, cfg.flow.eps0, pad);
    const Domain work = detail::work_domain(R.dom, pad);

    std::vector<Characteristic> fan;
    {
        Rng rng(cfg.seed);
        for (int k = 0; k < cfg.curve_count; ++k)
            fan.push_back(detail::seeded_merged_curve(R.phi, R.dom, rng, cfg.flow));
        for (std::size_t k = 0; k < fan.size() && k < 8; ++k)
            fan[k].to_csv(cfg.out_dir + "/curve_" + std::to_string(k) + ".csv");
        emit_fan_svg(fan, R.dom, cfg.out_dir + "/fan.svg");
    }

    if (wanted("residual")) {
        Rng rng(cfg.seed + 1);
        double worst = 0;
        for (int k = 0; k < cfg.bump_count; ++k) {
            const double rz = rng.uniform(0.08, 0.35) * R.dom.width();
            const double rt = rng.uniform(0.08, 0.35) * R.dom.height();
            const double zc = rng.uniform(R.dom.z_lo + rz, R.dom.z_hi - rz);
            const double tc = rng.uniform(R.dom.t_lo + rt, R.dom.t_hi - rt);
            const Residual res =
                distributional_residual(R.phi, R.w, TestFunction(zc, tc, rz, rt), R.dom,
                                        cfg.quad_res);
            worst = std::max(worst, res.relative());
        }
        rep.add(Check::make("residual_relative_max", worst, cfg.residual_tol, 0.0, "le",
                            "weak form of the balance law against seeded bumps"));
    }

    if (wanted("lipschitz")) {
        double worst = 0;
        for (const auto& c : fan) worst = std::max(worst, lipschitz_along(R.phi, c));
        rep.add(Check::make("lipschitz_along_max", worst, R.w_sup + cfg.lipschitz_slack, 0.0,
                            "le", "phi is ||w||-Lipschitz along characteristics"));
    }

    if (wanted("dafermos")) {
        double worst_defect = 0, worst_lhs = -1e300;
        Rng rng(cfg.seed + 2);
        for (const auto& c : fan) {
            const double lo = c.s_begin, hi = c.s_end();
            double a = rng.uniform(lo, hi), b = rng.uniform(lo, hi);
            if (a > b) std::swap(a, b);
            if (b - a < 0.1 * (hi - lo)) b = std::min(hi, a + 0.1 * (hi - lo));
            try {
                const DafermosResult d =
                    dafermos_defect(R.phi, R.w, c, R.dom, a, b, cfg.dafermos_eps);
                worst_defect = std::max(worst_defect, std::fabs(d.defect));
                worst_lhs = std::max(worst_lhs, d.lhs);
            } catch (const error&) {
                // strip exited the domain for this draw; skip
            }
        }
        rep.add(Check::make("dafermos_defect_max", worst_defect, cfg.dafermos_tol, 0.0, "le",
                            "strip identity along characteristics"));
        rep.add(Check::make("dafermos_lhs_max", worst_lhs, cfg.dafermos_tol, 0.0, "le",
                            "strip flux minus source is nonpositive"));
    }

    if (wanted("holder")) {
        const HolderCheck hc = holder_vertical_check(R.phi, R.dom, R.w_sup, 20000, cfg.seed + 3);
        rep.add(Check::make("holder_vertical_ratio", hc.max_ratio, hc.bound, 0.0, "le",
                            "vertical 1/2-Hoelder bound 2 sqrt(2L)"));
    }

    if (wanted("intrinsic")) {
        const double L = intrinsic_lip_constant(R.phi, R.dom, 20000, cfg.seed + 4);
        const double bound = 2.0 * std::sqrt(2.0 * std::max(R.w_sup, 1e-9)) + R.w_sup + 1.0;
        rep.add(Check::make("intrinsic_lip_constant", L, bound, 0.0, "le",
                            "graph quasidistance Lipschitz ratio"));
    }

    if (wanted("broad")) {
        auto probe_eval = [&](double s, double t) -> std::optional<double> {
            const BroadProbe pr = broad_probe(phi_pad, work, s, R.dom.clamp_t(t), cfg.flow);
            if (pr.flag != BroadFlag::Ok) return std::nullopt;
            return pr.value;
        };
        std::vector<Characteristic> sub(fan.begin(),
                                        fan.begin() + std::min<std::size_t>(fan.size(), 10));
        VerificationReport b = check_broad(R.phi, probe_eval, sub, cfg.broad_tol, R.w_sup,
                                           static_cast<std::size_t>(cfg.broad_stride));
        double worst = -1e300;
        for (const auto& c : b.checks) worst = std::max(worst, c.measured - c.tolerance);
        rep.add(Check::make("broad_reduction_overshoot", worst, 0.0, 1e-12, "le",
                            "d/ds phi = w-hat along curves, pointwise probe; "
                            "negative margin means all curves fit"));
    }

    if (wanted("param") || wanted("mollify")) {
        LagrangianParam p = build_full_param(R.phi, R.dom, cfg.param_resolution, cfg.flow);
        if (wanted("param")) {
            p.to_csv(cfg.out_dir + "/param.csv");
            rep.add(Check::make("param_monotone_violation", p.monotone_violation(), 0.0, 0.0,
                                "le", "sections nondecreasing in tau"));
            rep.add(Check::make("param_tau_low", p.tau.front(), 0.0, 1e-12, "ge",
                                "tau range inside [0,2]"));
            rep.add(Check::make("param_tau_high", p.tau.back(), 2.0, 1e-12, "le",
                                "tau range inside [0,2]"));
            rep.add(Check::make("param_section_gap", p.max_section_gap,
                                2.0 * R.dom.height() / (cfg.param_resolution - 1), 0.0, "le",
                                "discrete surjectivity of the full parameterisation"));
        }
        if (wanted("mollify")) {
            double prev = -1, worst_step = -1e300;
            for (double eps : {0.1, 0.05, 0.025}) {
                const MollifyResult m = mollify_param(p, eps);
                if (prev >= 0) worst_step = std::max(worst_step, m.l1_gap - prev);
                prev = m.l1_gap;
            }
            rep.add(Check::make("mollify_l1_decrease", worst_step, 0.0, 0.0, "le",
                                "L1 gap decreases as eps shrinks"));
        }
    }

    rep.write_json(cfg.out_dir + "/report.json");
    return rep;
}

}  // namespace ilg
