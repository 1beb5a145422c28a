#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "ilg/domain.hpp"
#include "ilg/field.hpp"

namespace ilg {

enum class Selection { Generic, Minimal, Maximal, MergedMinFwdMaxBwd };

inline const char* selection_name(Selection s) {
    switch (s) {
        case Selection::Generic: return "generic";
        case Selection::Minimal: return "minimal";
        case Selection::Maximal: return "maximal";
        case Selection::MergedMinFwdMaxBwd: return "merged";
    }
    return "?";
}

/** Discretisation of the extremal-solution machinery: fixed RK4 step h, and the
 *  eps-shift ladder eps_k = eps0 * 2^-k, k = 0..eps_levels, stopped once two
 *  successive levels agree to tol in sup norm. */
struct FlowOptions {
    double h = 1e-3;
    int eps_levels = 16;
    double eps0 = 1e-2;
    double tol = 1e-4;

    void validate() const {
        if (!(h > 0) || !(eps0 > 0) || !(tol > 0) || eps_levels < 1)
            throw error("FlowOptions: h, eps0, tol must be positive and eps_levels >= 1");
    }
};

/** A sampled solution of gamma' = phi(s, gamma) on a uniform s-grid.
 *  Samples always lie in the closed domain; curves that would exit through the top or
 *  bottom edge are truncated there and flagged clipped. */
struct Characteristic {
    double s0 = 0;        // anchor abscissa the curve was launched from
    double s_begin = 0;   // abscissa of samples.front()
    double h = 0;
    std::vector<double> gamma;
    Selection selection = Selection::Generic;
    bool clipped_begin = false, clipped_end = false;
    double consistency_C = 0;  // max_i |g_{i+1}-g_i-h*phi(s_i,g_i)| / h^2 vs the source field
    double eps_used = 0;       // final shift of the eps ladder (0 for plain integration)

    std::size_t size() const { return gamma.size(); }
    double s_at(std::size_t i) const { return s_begin + static_cast<double>(i) * h; }
    double s_end() const { return gamma.empty() ? s_begin : s_at(gamma.size() - 1); }

    bool covers(double s, double slack = 0.0) const {
        return s >= s_begin - slack && s <= s_end() + slack;
    }

    /** Linear interpolation between samples; s must lie in the realized range. */
    double value_at(double s) const {
        if (gamma.empty()) throw error("Characteristic: empty curve");
        const double x = (s - s_begin) / h;
        if (x < -1e-9 || x > static_cast<double>(gamma.size() - 1) + 1e-9)
            throw error("Characteristic: abscissa outside curve range");
        if (gamma.size() == 1) return gamma[0];
        std::size_t i = static_cast<std::size_t>(std::max(0.0, std::min(x, gamma.size() - 2.0)));
        const double f = x - static_cast<double>(i);
        return gamma[i] * (1.0 - f) + gamma[i + 1] * f;
    }

    void to_csv(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw config_error("cannot write curve CSV: " + path);
        out << "s,gamma\n";
        char buf[64];
        for (std::size_t i = 0; i < gamma.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s_at(i), gamma[i]);
            out << buf;
        }
    }

    static Characteristic from_csv(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open curve CSV: " + path);
        std::string line;
        std::getline(in, line);  // header
        std::vector<double> ss, gs;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            double s, g;
            if (std::sscanf(line.c_str(), "%lf,%lf", &s, &g) != 2)
                throw config_error("bad curve CSV row: " + line);
            ss.push_back(s); gs.push_back(g);
        }
        if (ss.size() < 2) throw config_error("curve CSV needs at least 2 samples: " + path);
        Characteristic c;
        c.h = ss[1] - ss[0];
        for (std::size_t i = 1; i + 1 < ss.size(); ++i)
            if (std::fabs(ss[i + 1] - ss[i] - c.h) > 1e-9 * std::max(1.0, std::fabs(c.h)))
                throw config_error("curve CSV grid is not uniform: " + path);
        c.s_begin = ss.front();
        c.s0 = ss.front();
        c.gamma = std::move(gs);
        return c;
    }
};

/** Extremal-solution iteration failed to settle within eps_levels. */
struct flow_error : error {
    Characteristic last, previous;
    double gap = 0;
    flow_error(std::string msg, Characteristic l, Characteristic p, double g)
        : error(std::move(msg) + " (last gap " + std::to_string(g) + ")"),
          last(std::move(l)), previous(std::move(p)), gap(g) {}
};

namespace detail {

/** One RK4 integration of gamma' = phi(s,gamma) + shift, forward from (s0,t0) to s_b and
 *  backward to s_a, on the grid s0 + k h.  Field evaluations are clamped to the closed
 *  rectangle; samples stop at the first step that would leave [t_lo, t_hi]. */
template <class Phi>
Characteristic rk4_two_sided(Phi&& phi, const Domain& dom, double s0, double t0,
                             double s_a, double s_b, double h,
                             double shift_fwd, double shift_bwd) {
    auto f = [&](double s, double t, double shift) {
        return phi(dom.clamp_z(s), dom.clamp_t(t)) + shift;
    };
    auto step = [&](double s, double t, double dir_h, double shift) {
        const double k1 = f(s, t, shift);
        const double k2 = f(s + dir_h / 2, t + dir_h / 2 * k1, shift);
        const double k3 = f(s + dir_h / 2, t + dir_h / 2 * k2, shift);
        const double k4 = f(s + dir_h, t + dir_h * k3, shift);
        return t + dir_h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    };

    const long m_b = std::lround(std::max(0.0, (s0 - s_a) / h));
    const long m_f = std::lround(std::max(0.0, (s_b - s0) / h));

    std::vector<double> fwd{t0}, bwd;
    bool clip_end = false, clip_begin = false;
    double t = t0;
    for (long i = 0; i < m_f; ++i) {
        t = step(s0 + static_cast<double>(i) * h, t, h, shift_fwd);
        if (t < dom.t_lo || t > dom.t_hi) { clip_end = true; break; }
        fwd.push_back(t);
    }
    t = t0;
    for (long i = 0; i < m_b; ++i) {
        t = step(s0 - static_cast<double>(i) * h, t, -h, shift_bwd);
        if (t < dom.t_lo || t > dom.t_hi) { clip_begin = true; break; }
        bwd.push_back(t);
    }

    Characteristic c;
    c.s0 = s0;
    c.h = h;
    c.s_begin = s0 - static_cast<double>(bwd.size()) * h;
    c.clipped_begin = clip_begin;
    c.clipped_end = clip_end;
    c.gamma.reserve(bwd.size() + fwd.size());
    for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) c.gamma.push_back(*it);
    for (double v : fwd) c.gamma.push_back(v);
    return c;
}

template <class Phi>
void stamp_consistency(Characteristic& c, Phi&& phi, const Domain& dom) {
    double worst = 0;
    for (std::size_t i = 0; i + 1 < c.gamma.size(); ++i) {
        const double s = c.s_at(i);
        const double d = std::fabs(c.gamma[i + 1] - c.gamma[i] -
                                   c.h * phi(dom.clamp_z(s), dom.clamp_t(c.gamma[i])));
        worst = std::max(worst, d);
    }
    c.consistency_C = worst / (c.h * c.h);
}

/** Sup distance over the common range; a mismatch in realized ranges beyond one step
 *  counts as the full height (prevents spurious convergence of clipped curves). */
inline double curve_gap(const Characteristic& a, const Characteristic& b, const Domain& dom) {
    if (std::fabs(a.s_begin - b.s_begin) > a.h * 1.5 ||
        std::fabs(a.s_end() - b.s_end()) > a.h * 1.5)
        return dom.height();
    const double lo = std::max(a.s_begin, b.s_begin);
    const double hi = std::min(a.s_end(), b.s_end());
    double g = 0;
    const long n = std::lround((hi - lo) / a.h);
    for (long i = 0; i <= n; ++i) {
        const double s = lo + static_cast<double>(i) * a.h;
        g = std::max(g, std::fabs(a.value_at(s) - b.value_at(s)));
    }
    return g;
}

}  // namespace detail

namespace detail {

/** One-sided eps ladder: integrate gamma' = phi + sign*eps_k away from the anchor in one
 *  direction, halving eps until two successive levels agree to tol.
 *
 *  The two directions of an extremal curve converge at different rates (a branch that
 *  sticks to a degenerate zero of phi settles at eps^2 scale immediately, a fanning
 *  branch improves like eps), so each direction runs its own ladder.  Refining eps far
 *  below the step h would let the discrete flow punch through the O(eps^2) stagnation
 *  basin that realizes the selection; the guard below returns the pre-spike level when
 *  a converged-looking ladder suddenly jumps. */
template <class Phi>
Characteristic half_ladder(Phi&& f, const Domain& dom, double s0, double t0, bool forward,
                           double sign, double s_limit, const FlowOptions& opts,
                           const char* who) {
    const double s_a = forward ? s0 : s_limit;
    const double s_b = forward ? s_limit : s0;
    // keep refining at least until eps reaches the step scale (branches that stick to a
    // degenerate zero settle instantly in sup norm, but their residual eps-offset decays
    // only with further levels), and never force it much below h, where the discrete
    // flow punches through the O(eps^2) stagnation basin realizing the selection
    const double eps_release = std::max(1.5 * opts.h, opts.eps0 * std::pow(2.0, -opts.eps_levels));
    Characteristic prev;
    double prev_gap = -1;
    for (int k = 0; k <= opts.eps_levels; ++k) {
        const double eps = opts.eps0 * std::pow(2.0, -k);
        Characteristic cur = rk4_two_sided(f, dom, s0, t0, s_a, s_b, opts.h,
                                           forward ? sign * eps : 0.0,
                                           forward ? 0.0 : sign * eps);
        cur.eps_used = eps;
        if (k > 0) {
            const double gap = curve_gap(cur, prev, dom);
            if (gap <= opts.tol && eps <= eps_release) return cur;
            if (gap > opts.tol && prev_gap >= 0 && prev_gap <= 10 * opts.tol &&
                gap > 10 * prev_gap)
                return prev;  // escape past the resolvable selection scale
            prev_gap = gap;
        }
        prev = std::move(cur);
    }
    Characteristic last = prev;
    throw flow_error(std::string(who) + ": eps ladder did not converge", last, prev,
                     prev_gap);
}

/** Concatenate a backward and a forward half sharing the anchor sample. */
inline Characteristic splice(const Characteristic& bwd, const Characteristic& fwd) {
    Characteristic c;
    c.s0 = fwd.s0;
    c.h = fwd.h;
    c.s_begin = bwd.s_begin;
    c.clipped_begin = bwd.clipped_begin;
    c.clipped_end = fwd.clipped_end;
    c.eps_used = std::max(bwd.eps_used, fwd.eps_used);
    c.gamma = bwd.gamma;
    for (std::size_t i = 1; i < fwd.gamma.size(); ++i) c.gamma.push_back(fwd.gamma[i]);
    return c;
}

}  // namespace detail

/** Classical 4-stage RK4 solution through `from`, no selection among the Peano funnel. */
inline Characteristic integrate(const ScalarField& phi, const Domain& dom,
                                double s_from, double t_from, double s_a, double s_b,
                                const FlowOptions& opts = {}) {
    opts.validate();
    if (!(s_a <= s_from && s_from <= s_b)) throw error("integrate: need s_a <= from.s <= s_b");
    if (s_b - s_a < opts.h) throw error("integrate: zero-length range");
    if (!dom.contains(s_from, t_from)) throw error("integrate: anchor outside domain");
    auto f = [&](double z, double t) { return phi.eval(z, t); };
    Characteristic c = detail::rk4_two_sided(f, dom, s_from, t_from, s_a, s_b, opts.h, 0.0, 0.0);
    c.selection = Selection::Generic;
    detail::stamp_consistency(c, f, dom);
    return c;
}

/** Minimal or maximal solution through `from` by the eps-shift ladders.
 *
 *  A curve of gamma' = phi - eps is a strict subsolution forward of the anchor and a
 *  strict supersolution backward, so Minimal integrates phi-eps forward / phi+eps
 *  backward and Maximal the mirror image, each direction with its own ladder. */
inline Characteristic extremal(const ScalarField& phi, const Domain& dom,
                               double s_from, double t_from, Selection side,
                               double s_a, double s_b, const FlowOptions& opts = {}) {
    opts.validate();
    if (side != Selection::Minimal && side != Selection::Maximal)
        throw error("extremal: side must be Minimal or Maximal");
    if (!(s_a <= s_from && s_from <= s_b)) throw error("extremal: need s_a <= from.s <= s_b");
    if (!dom.contains(s_from, t_from)) throw error("extremal: anchor outside domain");
    auto f = [&](double z, double t) { return phi.eval(z, t); };
    const double sign = (side == Selection::Maximal) ? 1.0 : -1.0;
    const Characteristic fwd =
        detail::half_ladder(f, dom, s_from, t_from, true, sign, s_b, opts, "extremal");
    const Characteristic bwd =
        detail::half_ladder(f, dom, s_from, t_from, false, -sign, s_a, opts, "extremal");
    Characteristic c = detail::splice(bwd, fwd);
    c.selection = side;
    detail::stamp_consistency(c, f, dom);
    return c;
}

/** Lemma 4.2 curve through an interior anchor: minimal forward in s, maximal backward.
 *  Both branches integrate phi - eps. */
inline Characteristic merged(const ScalarField& phi, const Domain& dom,
                             double s_from, double t_from, double s_a, double s_b,
                             const FlowOptions& opts = {}) {
    opts.validate();
    if (!(s_a <= s_from && s_from <= s_b)) throw error("merged: need s_a <= from.s <= s_b");
    if (!dom.contains(s_from, t_from)) throw error("merged: anchor outside domain");
    auto f = [&](double z, double t) { return phi.eval(z, t); };
    const Characteristic fwd =
        detail::half_ladder(f, dom, s_from, t_from, true, -1.0, s_b, opts, "merged");
    const Characteristic bwd =
        detail::half_ladder(f, dom, s_from, t_from, false, -1.0, s_a, opts, "merged");
    Characteristic c = detail::splice(bwd, fwd);
    c.selection = Selection::MergedMinFwdMaxBwd;
    detail::stamp_consistency(c, f, dom);
    return c;
}

}  // namespace ilg
