#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ilg/along.hpp"
#include "ilg/domain.hpp"
#include "ilg/field.hpp"
#include "ilg/flow.hpp"
#include "ilg/report.hpp"

namespace ilg {

enum class BroadFlag : std::uint8_t { Ok = 0, Multivalued = 1, Failed = 2 };

struct BroadProbe {
    BroadFlag flag = BroadFlag::Failed;
    double value = 0;        // for Multivalued: the Minimal-branch value (fixed tie-break)
    double branch_min = 0;   // forward second derivative along the Minimal curve
    double branch_max = 0;   // along the Maximal curve
    bool has_branches = false;
};

namespace detail {

/** Forward-branch averaged second derivative along an extremal curve (right quotient,
 *  falling back to the left one at the far domain edge). */
inline std::optional<double> branch_second_derivative(const ScalarField& phi,
                                                      const Characteristic& c, double s_star,
                                                      int levels, double tol) {
    const SecondDerivative sd = second_derivative_along(phi, c, s_star, levels, tol);
    if (sd.right_ok) return sd.right;
    if (sd.left_ok) return sd.left;
    return std::nullopt;
}

}  // namespace detail

/** The universal-representative probe at one point: a two-sided quotient limit along the
 *  merged characteristic is decisive (the point is then a Lebesgue point of a curve's
 *  second derivative); otherwise the forward branch derivatives of the Minimal and
 *  Maximal curves are compared.  Disagreeing branches are flagged Multivalued, never
 *  averaged; the recorded value is the Minimal one (fixed tie-break). */
inline BroadProbe broad_probe(const ScalarField& phi, const Domain& dom, double z, double t,
                              const FlowOptions& opts = {}, int levels = 4,
                              double tol = 2e-3) {
    BroadProbe out;
    try {
        const Characteristic mc = merged(phi, dom, z, t, dom.z_lo, dom.z_hi, opts);
        if (mc.size() >= 3) {
            const SecondDerivative sd = second_derivative_along(phi, mc, z, levels, tol);
            if (sd.status == SecondDerivative::Status::TwoSided) {
                out.flag = BroadFlag::Ok;
                out.value = sd.value;
                return out;
            }
        }
        const Characteristic cmin =
            extremal(phi, dom, z, t, Selection::Minimal, dom.z_lo, dom.z_hi, opts);
        const Characteristic cmax =
            extremal(phi, dom, z, t, Selection::Maximal, dom.z_lo, dom.z_hi, opts);
        const auto vmin = detail::branch_second_derivative(phi, cmin, z, levels, tol);
        const auto vmax = detail::branch_second_derivative(phi, cmax, z, levels, tol);
        if (!vmin || !vmax) return out;  // Failed
        out.branch_min = *vmin;
        out.branch_max = *vmax;
        out.has_branches = true;
        if (std::fabs(*vmin - *vmax) <= 2.0 * tol) {
            out.flag = BroadFlag::Ok;
            out.value = 0.5 * (*vmin + *vmax);
        } else {
            out.flag = BroadFlag::Multivalued;
            out.value = *vmin;
        }
    } catch (const error&) {
        out.flag = BroadFlag::Failed;
    }
    return out;
}

struct BroadField {
    ScalarField w_hat;  // Sampled on the grid_res x grid_res lattice
    std::vector<BroadFlag> flags;
    std::vector<double> branch_min, branch_max;  // parallel to flags, valid when flagged
    int res = 0;
    Domain domain;   // lattice rectangle (curves probe a possibly larger one)

    BroadFlag flag_at(int iz, int it) const {
        return flags[static_cast<std::size_t>(iz) * res + it];
    }
    double node_z(int iz) const { return domain.z_lo + domain.width() * iz / (res - 1); }
    double node_t(int it) const { return domain.t_lo + domain.height() * it / (res - 1); }
};

/** Numerical realization of the universal representative w-hat on a lattice: per node,
 *  the broad probe above; failures become per-point flags, never aborts.
 *
 *  z_margin shrinks the lattice rectangle in z while the curves keep the full domain:
 *  at the very z-edges the one-sided funnel has no room inside omega, so callers wanting
 *  fully classified nodes evaluate on a compact sub-rectangle. */
inline BroadField broad_representative(const ScalarField& phi, const Domain& dom, int grid_res,
                                       const FlowOptions& opts = {}, double z_margin = 0.0) {
    if (grid_res < 3) throw error("broad_representative: grid_res must be >= 3");
    if (z_margin < 0 || 2 * z_margin >= dom.width())
        throw error("broad_representative: bad z_margin");
    Domain lat = dom;
    lat.z_lo += z_margin;
    lat.z_hi -= z_margin;
    BroadField out;
    out.res = grid_res;
    out.domain = lat;
    out.flags.assign(static_cast<std::size_t>(grid_res) * grid_res, BroadFlag::Failed);
    out.branch_min.assign(out.flags.size(), 0.0);
    out.branch_max.assign(out.flags.size(), 0.0);
    std::vector<double> values(out.flags.size(), 0.0);
    for (int iz = 0; iz < grid_res; ++iz) {
        const double z = lat.z_lo + lat.width() * iz / (grid_res - 1);
        for (int it = 0; it < grid_res; ++it) {
            const double t = lat.t_lo + lat.height() * it / (grid_res - 1);
            const BroadProbe pr = broad_probe(phi, dom, z, t, opts);
            const std::size_t k = static_cast<std::size_t>(iz) * grid_res + it;
            out.flags[k] = pr.flag;
            values[k] = pr.value;
            if (pr.has_branches) {
                out.branch_min[k] = pr.branch_min;
                out.branch_max[k] = pr.branch_max;
            }
        }
    }
    out.w_hat = ScalarField::sampled(lat, grid_res, grid_res, std::move(values));
    return out;
}

/** Broad-solution check (B.2): along each curve, compare phi(end)-phi(start) with the
 *  composite trapezoid of w-hat over the (possibly strided) samples; samples where the
 *  evaluator declines (flagged) are excluded and their measure relaxes the bound by
 *  measure * w_sup.  The evaluator abstraction admits both a lattice w-hat and the
 *  pointwise probe. */
inline VerificationReport check_broad(
    const ScalarField& phi,
    const std::function<std::optional<double>(double s, double t)>& w_hat_at,
    const std::vector<Characteristic>& curves, double tol, double w_sup,
    std::size_t stride = 1) {
    if (stride < 1) stride = 1;
    VerificationReport rep;
    rep.instance = "check_broad";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& cv = curves[c];
        if (cv.size() < 2) throw error("check_broad: degenerate curve");
        std::vector<double> ss, ws;
        double flagged_measure = 0;
        for (std::size_t i = 0; i < cv.size(); i += stride) {
            const double s = cv.s_at(i);
            const auto v = w_hat_at(s, cv.gamma[i]);
            if (v) {
                ss.push_back(s);
                ws.push_back(*v);
            } else {
                flagged_measure += cv.h * static_cast<double>(stride);
            }
        }
        if (ss.size() < 2) throw error("check_broad: too few usable samples on curve");
        double integral = 0;
        for (std::size_t i = 1; i < ss.size(); ++i)
            integral += 0.5 * (ws[i] + ws[i - 1]) * (ss[i] - ss[i - 1]);
        const double dphi = phi.eval(cv.s_end(), cv.gamma.back()) -
                            phi.eval(cv.s_at(0), cv.gamma.front());
        const double gap = std::fabs(dphi - integral);
        rep.add(Check::make("broad_curve_" + std::to_string(c), gap, 0.0,
                            tol + flagged_measure * w_sup, "abs_le",
                            "d/ds phi(Gamma(s)) = w_hat(Gamma(s)) a.e."));
    }
    return rep;
}

/** Lattice-backed evaluator: bilinear w-hat, declining at flagged nodes (a sample is
 *  flagged when its nearest lattice node is). */
inline std::function<std::optional<double>(double, double)> lattice_w_hat(const BroadField& bf) {
    return [bf](double s, double t) -> std::optional<double> {
        const Domain& d = bf.domain;
        const int iz = static_cast<int>(std::lround((s - d.z_lo) / d.width() * (bf.res - 1)));
        const int it = static_cast<int>(std::lround((t - d.t_lo) / d.height() * (bf.res - 1)));
        const int cz = std::max(0, std::min(bf.res - 1, iz));
        const int ct = std::max(0, std::min(bf.res - 1, it));
        if (bf.flag_at(cz, ct) != BroadFlag::Ok) return std::nullopt;
        return bf.w_hat.eval(d.clamp_z(s), d.clamp_t(t));
    };
}

}  // namespace ilg
