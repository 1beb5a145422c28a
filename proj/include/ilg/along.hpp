#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ilg/domain.hpp"
#include "ilg/field.hpp"
#include "ilg/flow.hpp"
#include "ilg/quadrature.hpp"

namespace ilg {

/** Discrete Lipschitz constant of s -> phi(s, gamma(s)) over the curve samples.
 *  The max over all sample pairs (i<j) of |f_j-f_i|/(s_j-s_i) equals the max over
 *  adjacent pairs, since any pair quotient is a mean of adjacent ones. */
inline double lipschitz_along(const ScalarField& phi, const Characteristic& curve) {
    if (curve.size() < 3) throw error("lipschitz_along: degenerate curve (< 3 samples)");
    double lip = 0, prev = phi.eval(curve.s_at(0), curve.gamma[0]);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const double cur = phi.eval(curve.s_at(i), curve.gamma[i]);
        lip = std::max(lip, std::fabs(cur - prev) / curve.h);
        prev = cur;
    }
    return lip;
}

struct DafermosResult {
    double lhs = 0;     // boundary fluxes minus source integral over the eps-strip
    double defect = 0;  // lhs + (1/2) * int [phi(s,gamma+eps)-phi(s,gamma)]^2 ds, ~0 for solutions
};

/** Strip identity along a characteristic (Dafermos).  For a distributional solution,
 *      F(b) - F(a) - int_a^b int_gamma^{gamma+eps} w  =  -1/2 int_a^b [dphi]^2 ds <= 0,
 *  where F(s) integrates phi over the eps-strip above gamma(s); lhs is the left side
 *  and defect adds the square term back, so |defect| ~ quadrature error on solutions. */
inline DafermosResult dafermos_defect(const ScalarField& phi, const ScalarField& w,
                                      const Characteristic& curve, const Domain& dom,
                                      double a, double b, double eps,
                                      double quad_step = 1e-3) {
    if (eps <= 0) throw error("dafermos_defect: eps must be positive");
    if (!curve.covers(a) || !curve.covers(b) || !(a < b))
        throw error("dafermos_defect: [a,b] not inside the curve range");
    const long n = std::lround(std::ceil((b - a) / quad_step));
    for (long i = 0; i <= n; ++i) {
        const double s = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
        if (curve.value_at(s) + eps > dom.t_hi + 1e-12)
            throw error("dafermos_defect: eps-strip exits the domain");
    }

    auto strip = [&](const ScalarField& f, double s) {
        const double g = curve.value_at(s);
        return simpson([&](double t) { return f.eval(s, t); }, g, g + eps, quad_step * eps);
    };
    const double flux = strip(phi, b) - strip(phi, a);
    const double source = simpson([&](double s) { return strip(w, s); }, a, b, quad_step);
    const double square = simpson(
        [&](double s) {
            const double g = curve.value_at(s);
            const double d = phi.eval(s, g + eps) - phi.eval(s, g);
            return d * d;
        },
        a, b, quad_step);

    DafermosResult r;
    r.lhs = flux - source;
    r.defect = r.lhs + 0.5 * square;
    return r;
}

/** Window sequence h_1 = 1/2, h_{n+1} = h_n - h_n^2; slow enough that convergence of
 *  averaged difference quotients along it implies the full Lebesgue limit. */
inline std::vector<double> h_sequence(int count) {
    std::vector<double> hs;
    hs.reserve(static_cast<std::size_t>(std::max(0, count)));
    double h = 0.5;
    for (int i = 0; i < count; ++i) {
        hs.push_back(h);
        h = h - h * h;
    }
    return hs;
}

struct SecondDerivative {
    enum class Status { TwoSided, LeftOnly, RightOnly, Disagree, NonConvergent };
    Status status = Status::NonConvergent;
    double value = 0;                    // meaningful when converged()
    double left = 0, right = 0;          // per-side limits when the side converged
    bool left_ok = false, right_ok = false;
    double h_used = 0;                   // smallest window examined

    bool converged() const {
        return status == Status::TwoSided || status == Status::LeftOnly ||
               status == Status::RightOnly;
    }
    bool multivalued() const { return status == Status::Disagree; }
};

/** Averaged difference quotients of f = phi(s, gamma(s)) at s_star over windows
 *  h_n * scale from the h-sequence, each side separately.  The quotient averages the
 *  second derivative over the outer half of the window,
 *      q = (f(s* + w) - f(s* + w/2)) / (w/2)        (mirrored on the left),
 *  which never touches the anchor sample itself: positional noise of numerically built
 *  curves is common-mode along the curve and cancels, while the anchor is pinned exactly
 *  and would not.  A side converges when its last `levels` quotients agree within tol;
 *  the two-sided value is the mean of the sides, and disagreeing sides are flagged
 *  rather than averaged. */
inline SecondDerivative second_derivative_along(const ScalarField& phi,
                                                const Characteristic& curve, double s_star,
                                                int levels = 4, double tol = 2e-3) {
    if (levels < 3) throw error("second_derivative_along: levels must be >= 3");
    if (!curve.covers(s_star)) throw error("second_derivative_along: s_star outside curve");

    auto f = [&](double s) { return phi.eval(s, curve.value_at(s)); };
    // eps-built curves settle onto their shifted flow within a relaxation stretch of a
    // few eps around the anchor; windows stay above it so quotients average the settled
    // branch, not the transient
    const double min_window = std::max(4.0 * curve.h, 16.0 * curve.eps_used);

    // windows h_n * S from the h-sequence scaled by the whole curve range; windows not
    // fitting on a side are skipped, so off-center points still see the dense tail
    const double S = curve.s_end() - curve.s_begin;
    auto side_quotients = [&](double avail, int dir) {
        std::vector<double> qs;
        if (avail < min_window) return qs;
        double h = 0.5;
        for (int i = 0; i < 4000; ++i) {
            const double w = h * S;
            if (w < min_window) break;
            h = h - h * h;
            if (w > avail) continue;
            qs.push_back(dir * (f(s_star + dir * w) - f(s_star + dir * w / 2)) / (w / 2));
        }
        return qs;
    };
    auto settled = [&](const std::vector<double>& qs) {
        if (static_cast<int>(qs.size()) < levels) return false;
        double lo = qs.back(), hi = qs.back();
        for (int i = 0; i < levels; ++i) {
            const double q = qs[qs.size() - 1 - static_cast<std::size_t>(i)];
            lo = std::min(lo, q); hi = std::max(hi, q);
        }
        return hi - lo <= tol;
    };

    const double scale_r = curve.s_end() - s_star;
    const double scale_l = s_star - curve.s_begin;
    auto right = side_quotients(scale_r, +1);
    auto left = side_quotients(scale_l, -1);

    SecondDerivative out;
    out.right_ok = settled(right);
    out.left_ok = settled(left);
    if (out.right_ok) { out.right = right.back(); out.h_used = std::min(min_window, scale_r); }
    if (out.left_ok) { out.left = left.back(); }

    if (out.right_ok && out.left_ok) {
        if (std::fabs(out.right - out.left) <= 2.0 * tol) {
            out.status = SecondDerivative::Status::TwoSided;
            out.value = 0.5 * (out.left + out.right);
        } else {
            out.status = SecondDerivative::Status::Disagree;
        }
    } else if (out.right_ok && left.empty()) {
        out.status = SecondDerivative::Status::RightOnly;
        out.value = out.right;
    } else if (out.left_ok && right.empty()) {
        out.status = SecondDerivative::Status::LeftOnly;
        out.value = out.left;
    } else {
        out.status = SecondDerivative::Status::NonConvergent;
    }
    return out;
}

}  // namespace ilg
