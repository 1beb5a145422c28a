#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ilg/domain.hpp"
#include "ilg/field.hpp"
#include "ilg/flow.hpp"
#include "ilg/theta.hpp"

namespace ilg {

/** One recursive extension step at a dichotomous section s^{h,n} = 2^-n + 2^{-n+1} h.
 *  Gap lengths are normalized by the domain height before entering the parameter
 *  injection, so the per-step parameter growth obeys growth <= 2^{1-2n}. */
struct ExtensionStep {
    int n = 0, h = 0;
    double s = 0;
    struct Gap {
        double lo = 0, hi = 0;  // uncovered value interval at the section
        double tau_left = 0;    // parameter of the column bounding the gap from below
    };
    std::vector<Gap> gaps;
    std::vector<double> inserted_anchors;
    double growth = 0;  // sum |I_k| / height / 2^{2n-1}

    double jump(const Gap& g, double height) const {
        return (g.hi - g.lo) / height / std::pow(2.0, 2 * n - 1);
    }
    /** The injection j^{h,n}: old parameters shift up by the jumps of all gaps strictly
     *  below them (a gap opens just above its left bounding column). */
    double apply(double tau, double height) const {
        double shift = 0;
        for (const auto& g : gaps)
            if (g.tau_left < tau) shift += jump(g, height);
        return tau + shift;
    }
};

struct ExtensionTrace {
    std::vector<ExtensionStep> steps;

    double apply(double tau, double height) const {
        for (const auto& st : steps) tau = st.apply(tau, height);
        return tau;
    }
};

/** A monotone family chi(s, tau) of characteristics, stored column-major: chi[j] is the
 *  curve belonging to tau[j], sampled on the uniform s_grid.
 *
 *  Builders work on a padded copy of the field (tapered to zero above and below the
 *  rectangle, Lemma 4.2 Step 1 style) so that no curve is clipped; `domain` is the
 *  original rectangle, `work` the padded strip the samples actually live in. */
struct LagrangianParam {
    enum class Kind { Partial, Full };

    Domain domain;
    Domain work;
    ScalarField phi;       // the original field
    ScalarField phi_work;  // padded field the columns solve
    std::vector<double> s_grid;
    std::vector<double> tau;
    std::vector<std::vector<double>> chi;
    std::vector<std::size_t> anchor;  // s_grid index each column was launched from
    Kind kind = Kind::Partial;
    double flow_h = 0;
    double consistency_C = 0;
    double max_section_gap = 0;  // discrete surjectivity diagnostic inside [t_lo, t_hi]
    std::optional<ExtensionTrace> trace;

    std::size_t sections() const { return s_grid.size(); }
    std::size_t columns() const { return tau.size(); }

    std::size_t section_index(double s) const {
        if (s_grid.empty()) throw error("LagrangianParam: empty");
        const double h = s_grid.size() > 1 ? s_grid[1] - s_grid[0] : 1.0;
        long i = std::lround((s - s_grid.front()) / h);
        i = std::max(0L, std::min(i, static_cast<long>(s_grid.size()) - 1));
        return static_cast<std::size_t>(i);
    }

    /** Largest monotonicity violation over the stored matrix (0 when intact). */
    double monotone_violation() const {
        double worst = 0;
        for (std::size_t i = 0; i < sections(); ++i)
            for (std::size_t j = 1; j < columns(); ++j)
                worst = std::max(worst, chi[j - 1][i] - chi[j][i]);
        return worst;
    }

    /** Max image gap at section i, measured inside [t_lo, t_hi]. */
    double image_gap(std::size_t i) const {
        double gap = 0, prev = domain.t_lo;
        for (std::size_t j = 0; j < columns(); ++j) {
            const double v = chi[j][i];
            if (v < domain.t_lo) continue;
            gap = std::max(gap, std::min(v, domain.t_hi) - prev);
            prev = std::max(prev, std::min(v, domain.t_hi));
            if (v >= domain.t_hi) break;
        }
        gap = std::max(gap, domain.t_hi - prev);
        return gap;
    }

    Characteristic column_curve(std::size_t j) const {
        Characteristic c;
        c.s0 = s_grid.front();
        c.s_begin = s_grid.front();
        c.h = flow_h;
        c.gamma = chi.at(j);
        return c;
    }

    void to_csv(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw config_error("cannot write param CSV: " + path);
        char buf[64];
        out << "s";
        for (double tv : tau) {
            std::snprintf(buf, sizeof buf, ",%.17g", tv);
            out << buf;
        }
        out << "\n";
        for (std::size_t i = 0; i < sections(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", s_grid[i]);
            out << buf;
            for (std::size_t j = 0; j < columns(); ++j) {
                std::snprintf(buf, sizeof buf, ",%.17g", chi[j][i]);
                out << buf;
            }
            out << "\n";
        }
    }
};

namespace detail {

/** Extend a field continuously past the top and bottom edge: clamp to the rectangle and
 *  taper linearly to zero, so horizontal barrier curves exist inside the pad.  The pad
 *  also leaves room for the eps-shift dip of extremal curves launched on the edge. */
inline ScalarField pad_field(const ScalarField& phi, const Domain& dom, double eps0,
                             double& pad_out) {
    double bound = 0;
    const int r = 33;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            bound = std::max(bound, std::fabs(phi.eval(dom.z_lo + dom.width() * i / (r - 1),
                                                       dom.t_lo + dom.height() * j / (r - 1))));
    const double pad = std::max(0.05 * dom.height(), (1.1 * bound + 2.0 * eps0) * dom.width());
    pad_out = pad;
    const double ramp_end = 0.9 * pad;
    const Domain d = dom;
    auto fn = [d, phi, ramp_end](double z, double t) {
        const double tc = d.clamp_t(t);
        double ramp = 1.0;
        if (t > d.t_hi) ramp = std::max(0.0, 1.0 - (t - d.t_hi) / ramp_end);
        else if (t < d.t_lo) ramp = std::max(0.0, 1.0 - (d.t_lo - t) / ramp_end);
        return ramp * phi.eval(d.clamp_z(z), tc);
    };
    return ScalarField::native("padded(" + phi.text() + ")", fn);
}

inline Domain work_domain(const Domain& dom, double pad) {
    Domain w = dom;
    w.t_lo -= pad;
    w.t_hi += pad;
    return w;
}

/** Sort-key theta of a curve with values normalized to [0,1] by the work strip. */
inline double theta_key(const Characteristic& c, const Domain& work, int K = 30) {
    Characteristic n = c;
    for (double& v : n.gamma) v = (v - work.t_lo) / work.height();
    return theta_encode(n, K, work.z_lo, work.z_hi);
}

/** Check nondecreasing sections up to tol_err (throw beyond), then repair the sub-tol
 *  numeric inversions so the stored matrix is exactly monotone. */
inline void enforce_monotone(LagrangianParam& p, double tol_err) {
    double worst = p.monotone_violation();
    if (worst > tol_err)
        throw error("Lagrangian parameterisation: monotonicity violated by " +
                    std::to_string(worst));
    for (std::size_t i = 0; i < p.sections(); ++i)
        for (std::size_t j = 1; j < p.columns(); ++j)
            if (p.chi[j][i] < p.chi[j - 1][i]) p.chi[j][i] = p.chi[j - 1][i];
}

}  // namespace detail

/** Partial parameterisation from the minimal curves of the s = z_lo section: columns are
 *  extremal Minimal curves launched at (z_lo, t_j), t_j equispaced over the section, and
 *  tau is the launch height normalized to [0,1]. */
inline LagrangianParam build_minimal_param(const ScalarField& phi, const Domain& dom,
                                           int tau_samples, const FlowOptions& opts = {}) {
    if (tau_samples < 2) throw error("build_minimal_param: tau_samples must be >= 2");
    LagrangianParam p;
    p.domain = dom;
    p.phi = phi;
    double pad = 0;
    p.phi_work = detail::pad_field(phi, dom, opts.eps0, pad);
    p.work = detail::work_domain(dom, pad);
    p.flow_h = opts.h;

    const long n_steps = std::lround(dom.width() / opts.h);
    p.s_grid.resize(static_cast<std::size_t>(n_steps) + 1);
    for (long i = 0; i <= n_steps; ++i)
        p.s_grid[static_cast<std::size_t>(i)] = dom.z_lo + static_cast<double>(i) * opts.h;

    double worstC = 0;
    for (int j = 0; j < tau_samples; ++j) {
        const double tauj = static_cast<double>(j) / (tau_samples - 1);
        const double t0 = dom.t_lo + tauj * dom.height();
        Characteristic c = extremal(p.phi_work, p.work, dom.z_lo, t0, Selection::Minimal,
                                    dom.z_lo, dom.z_hi, opts);
        if (c.size() != p.s_grid.size())
            throw error("build_minimal_param: column clipped unexpectedly");
        worstC = std::max(worstC, c.consistency_C);
        p.tau.push_back(tauj);
        p.anchor.push_back(0);
        p.chi.push_back(std::move(c.gamma));
    }
    p.consistency_C = worstC;
    p.kind = LagrangianParam::Kind::Partial;
    detail::enforce_monotone(p, std::max(100.0 * opts.tol, 1e-6));
    return p;
}

/** Full parameterisation in the sense of Lemma 4.2: merged curves (minimal forward,
 *  maximal backward) through a resolution x resolution anchor lattice, deduplicated,
 *  ordered by theta, tau = theta values in [0,2].  Returns Full when the per-section
 *  image gap inside [t_lo,t_hi] is at most 2 lattice steps, Partial otherwise. */
inline LagrangianParam build_full_param(const ScalarField& phi, const Domain& dom,
                                        int resolution, const FlowOptions& opts = {}) {
    if (resolution < 2) throw error("build_full_param: resolution must be >= 2");
    LagrangianParam p;
    p.domain = dom;
    p.phi = phi;
    double pad = 0;
    p.phi_work = detail::pad_field(phi, dom, opts.eps0, pad);
    p.work = detail::work_domain(dom, pad);
    p.flow_h = opts.h;

    const long n_steps = std::lround(dom.width() / opts.h);
    p.s_grid.resize(static_cast<std::size_t>(n_steps) + 1);
    for (long i = 0; i <= n_steps; ++i)
        p.s_grid[static_cast<std::size_t>(i)] = dom.z_lo + static_cast<double>(i) * opts.h;

    struct Entry {
        double theta;
        std::size_t anchor;
        Characteristic curve;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(resolution) * resolution);
    double worstC = 0;
    for (int a = 0; a < resolution; ++a) {
        // anchors snap onto the flow grid so all columns share s_grid
        const double raw = dom.z_lo + dom.width() * a / (resolution - 1);
        const double sb = dom.z_lo + std::lround((raw - dom.z_lo) / opts.h) * opts.h;
        for (int b = 0; b < resolution; ++b) {
            const double tb = dom.t_lo + dom.height() * b / (resolution - 1);
            Characteristic c = merged(p.phi_work, p.work, sb, tb, dom.z_lo, dom.z_hi, opts);
            if (c.size() != p.s_grid.size())
                throw error("build_full_param: curve clipped unexpectedly");
            worstC = std::max(worstC, c.consistency_C);
            const std::size_t ai = static_cast<std::size_t>(std::lround((sb - dom.z_lo) / opts.h));
            entries.push_back({detail::theta_key(c, p.work), ai, std::move(c)});
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& x, const Entry& y) { return x.theta < y.theta; });

    const double dedupe_tol = std::max(20.0 * opts.tol, 1e-9);
    auto sup_diff = [](const Characteristic& x, const Characteristic& y) {
        double d = 0;
        for (std::size_t i = 0; i < x.gamma.size(); ++i)
            d = std::max(d, std::fabs(x.gamma[i] - y.gamma[i]));
        return d;
    };
    std::vector<Entry> kept;
    for (auto& e : entries) {
        if (!kept.empty()) {
            const double d = sup_diff(kept.back().curve, e.curve);
            if (d <= dedupe_tol) continue;
            if (e.theta - kept.back().theta < 1e-12)
                throw error("build_full_param: theta collision between distinct curves "
                            "(sup distance " + std::to_string(d) + ")");
        }
        kept.push_back(std::move(e));
    }

    for (auto& e : kept) {
        p.tau.push_back(e.theta);
        p.anchor.push_back(e.anchor);
        p.chi.push_back(std::move(e.curve.gamma));
    }
    p.consistency_C = worstC;
    detail::enforce_monotone(p, std::max(100.0 * opts.tol, 1e-6));

    const double t_step = dom.height() / (resolution - 1);
    double worst_gap = 0;
    for (std::size_t i = 0; i < p.sections(); ++i)
        worst_gap = std::max(worst_gap, p.image_gap(i));
    p.max_section_gap = worst_gap;
    p.kind = (worst_gap <= 2.0 * t_step) ? LagrangianParam::Kind::Full
                                         : LagrangianParam::Kind::Partial;
    return p;
}

/** Discrete Lipschitz constant of tau -> chi(s, tau) at the section nearest to s. */
inline double param_lip_profile(const LagrangianParam& p, double s) {
    if (p.columns() < 2) throw error("param_lip_profile: fewer than 2 parameters");
    const std::size_t i = p.section_index(s);
    double best = 0;
    for (std::size_t j = 1; j < p.columns(); ++j) {
        const double dtau = p.tau[j] - p.tau[j - 1];
        if (dtau < 1e-14) continue;
        best = std::max(best, (p.chi[j][i] - p.chi[j - 1][i]) / dtau);
    }
    return best;
}

}  // namespace ilg
