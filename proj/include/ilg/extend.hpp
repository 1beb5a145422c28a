#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ilg/domain.hpp"
#include "ilg/flow.hpp"
#include "ilg/param.hpp"

namespace ilg {

/** Structured trace export: one record per dichotomous section with its gaps, inserted
 *  anchors, and normalized parameter growth. */
inline nlohmann::ordered_json trace_to_json(const ExtensionTrace& tr) {
    nlohmann::ordered_json j;
    j["steps"] = nlohmann::ordered_json::array();
    for (const auto& st : tr.steps) {
        nlohmann::ordered_json sj;
        sj["n"] = st.n;
        sj["h"] = st.h;
        sj["section"] = st.s;
        sj["growth"] = st.growth;
        sj["growth_bound"] = std::pow(2.0, 1 - 2 * st.n);
        sj["gaps"] = nlohmann::ordered_json::array();
        for (const auto& g : st.gaps) sj["gaps"].push_back({g.lo, g.hi});
        sj["inserted_anchors"] = st.inserted_anchors;
        j["steps"].push_back(sj);
    }
    return j;
}

inline void trace_to_json_file(const ExtensionTrace& tr, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write trace JSON: " + path);
    out << trace_to_json(tr).dump(2) << "\n";
}

/** Knobs of the recursive extension.  gap_tol separates genuine image gaps from the
 *  spacing of the discrete curve family; fill_cap bounds how many curves one gap
 *  receives. */
struct ExtendOptions {
    double gap_tol = 0;  // 0: default to 3 * initial max spacing at the s=z_lo section
    int fill_cap = 8;
    double contact_tol = 0;  // unused hook; contact realized by pointwise clamping
};

namespace detail {

/** Maximal curve through (s*, z) clamped between the two old columns bounding its gap:
 *  the touch-and-follow rule of the extension lemma realized pointwise. */
inline std::vector<double> inserted_column(const LagrangianParam& p, double s_star, double z,
                                           const std::vector<double>& lower,
                                           const std::vector<double>& upper,
                                           const FlowOptions& opts) {
    const double eps = opts.eps0 * std::pow(2.0, -opts.eps_levels);
    auto f = [&](double zz, double tt) { return p.phi_work.eval(zz, tt); };
    Characteristic c = rk4_two_sided(f, p.work, s_star, z,
                                     p.s_grid.front(), p.s_grid.back(), p.flow_h,
                                     +eps, -eps);
    if (c.size() != p.s_grid.size())
        throw error("extend_param: inserted curve clipped unexpectedly");
    std::vector<double> col = std::move(c.gamma);
    for (std::size_t i = 0; i < col.size(); ++i)
        col[i] = std::min(upper[i], std::max(lower[i], col[i]));
    return col;
}

}  // namespace detail

/** Extend a partial monotone parameterisation towards a full one, running the recursive
 *  procedure over the dichotomous sections s^{h,n} = 2^-n + 2^{-n+1} h (normalized into
 *  the z-range), levels n = 1..depth in lexicographic order.  At each section: detect
 *  image gaps, open parameter space by the injection j^{h,n} (normalized gap length over
 *  2^{2n-1}), and insert maximal curves through the gap that merge onto the bounding old
 *  columns on contact.  Old columns are carried over bit-identically; the composed
 *  injections recorded in the trace map old parameters onto them. */
inline LagrangianParam extend_param(const LagrangianParam& p0, int depth,
                                    const FlowOptions& opts = {},
                                    const ExtendOptions& ext = {}) {
    if (depth < 1) throw error("extend_param: depth must be >= 1");
    LagrangianParam p = p0;
    if (!p.trace) p.trace.emplace();
    const double height = p.domain.height();

    double gap_tol = ext.gap_tol;
    if (gap_tol <= 0) {
        double spacing = 0;
        for (std::size_t j = 1; j < p.columns(); ++j)
            spacing = std::max(spacing, p.chi[j][0] - p.chi[j - 1][0]);
        gap_tol = 3.0 * std::max(spacing, 1e-12);
    }

    for (int n = 1; n <= depth; ++n) {
        for (int h = 0; h < (1 << (n - 1)); ++h) {
            const double frac = std::pow(2.0, -n) + std::pow(2.0, -n + 1) * h;
            const double s_star = p.domain.z_lo + frac * p.domain.width();
            const std::size_t si = p.section_index(s_star);

            ExtensionStep step;
            step.n = n;
            step.h = h;
            step.s = p.s_grid[si];

            for (std::size_t j = 0; j + 1 < p.columns(); ++j) {
                const double a = p.chi[j][si], b = p.chi[j + 1][si];
                if (b - a > gap_tol)
                    step.gaps.push_back({a, b, p.tau[j]});
            }
            if (step.gaps.empty()) {
                p.trace->steps.push_back(std::move(step));
                continue;
            }

            std::vector<double> new_tau;
            std::vector<std::vector<double>> new_chi;
            std::vector<std::size_t> new_anchor;
            new_tau.reserve(p.columns());
            new_chi.reserve(p.columns());
            double shift = 0;
            std::size_t gi = 0;
            for (std::size_t j = 0; j < p.columns(); ++j) {
                new_tau.push_back(p.tau[j] + shift);
                new_anchor.push_back(p.anchor[j]);
                new_chi.push_back(std::move(p.chi[j]));
                if (gi < step.gaps.size() && step.gaps[gi].tau_left == p.tau[j]) {
                    const auto& g = step.gaps[gi];
                    const double glen = g.hi - g.lo;
                    const double jump = step.jump(g, height);
                    const int m = std::max(1, std::min(ext.fill_cap,
                                                       static_cast<int>(std::ceil(glen / gap_tol)) - 1));
                    const auto& lower = new_chi.back();
                    const auto& upper = p.chi[j + 1];
                    for (int q = 1; q <= m; ++q) {
                        const double z = g.lo + glen * q / (m + 1);
                        std::vector<double> col =
                            detail::inserted_column(p, p.s_grid[si], z, lower, upper, opts);
                        // parameter from the inverse of the injection formula:
                        // z = hi - 2^{2n-1} * height * (j(tau_right) - sigma)
                        const double sigma =
                            p.tau[j] + shift + jump - (g.hi - z) / height / std::pow(2.0, 2 * n - 1);
                        step.inserted_anchors.push_back(z);
                        new_tau.push_back(sigma);
                        new_anchor.push_back(si);
                        new_chi.push_back(std::move(col));
                    }
                    shift += jump;
                    step.growth += jump;
                    ++gi;
                }
            }
            p.tau = std::move(new_tau);
            p.chi = std::move(new_chi);
            p.anchor = std::move(new_anchor);
            // restore global tau order (inserted parameters interleave by construction)
            std::vector<std::size_t> order(p.tau.size());
            for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
            std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                return p.tau[x] < p.tau[y];
            });
            std::vector<double> tau2(p.tau.size());
            std::vector<std::vector<double>> chi2(p.chi.size());
            std::vector<std::size_t> anchor2(p.anchor.size());
            for (std::size_t k = 0; k < order.size(); ++k) {
                tau2[k] = p.tau[order[k]];
                chi2[k] = std::move(p.chi[order[k]]);
                anchor2[k] = p.anchor[order[k]];
            }
            p.tau = std::move(tau2);
            p.chi = std::move(chi2);
            p.anchor = std::move(anchor2);
            detail::enforce_monotone(p, std::max(100.0 * opts.tol, 1e-6));
            p.trace->steps.push_back(std::move(step));
        }
    }
    p.kind = LagrangianParam::Kind::Partial;
    return p;
}

}  // namespace ilg
