#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "ilg/domain.hpp"
#include "ilg/field.hpp"
#include "ilg/param.hpp"

namespace ilg {

struct MollifyResult {
    LagrangianParam chi_eps;  // smoothed family on a uniform tau grid
    ScalarField phi_eps;      // the field defined by phi_eps(s, chi_eps(s,tau)) = d_s chi_eps
    double l1_gap = 0;        // discrete L1 distance |phi_eps - phi| over the domain lattice
};

namespace detail {

struct MollifiedFamily {
    std::vector<double> s_grid;
    std::vector<double> tau_u;                 // uniform
    std::vector<std::vector<double>> chi;      // chi[m] = column over s_grid
    std::vector<std::vector<double>> dchi_ds;  // centered differences per column
    double flat_tol = 0;

    /** Invert tau -> chi(s_i, tau) = t by bisection over the monotone column values;
     *  on flat stretches any parameter of the stretch is admissible. */
    double phi_at(std::size_t i, double t) const {
        const std::size_t M = tau_u.size();
        std::size_t lo = 0, hi = M - 1;
        if (t <= chi[0][i]) return dchi_ds[0][i];
        if (t >= chi[M - 1][i]) return dchi_ds[M - 1][i];
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (chi[mid][i] <= t ? lo : hi) = mid;
        }
        const double a = chi[lo][i], b = chi[hi][i];
        if (b - a <= flat_tol) return dchi_ds[lo][i];
        const double f = (t - a) / (b - a);
        return dchi_ds[lo][i] * (1 - f) + dchi_ds[hi][i] * f;
    }
};

}  // namespace detail

/** tau-mollification of a full parameterisation: chi_eps = chi * rho_eps in tau with a
 *  normalized C-infinity bump kernel, phi_eps read off through the monotone inversion of
 *  tau -> chi_eps(s, tau).  Returns the smoothed family, the field, and the discrete L1
 *  distance to the original phi over a lattice on the domain. */
inline MollifyResult mollify_param(const LagrangianParam& p, double eps,
                                   int tau_resolution = 1024, int l1_resolution = 101) {
    if (p.kind != LagrangianParam::Kind::Full)
        throw error("mollify_param: parameterisation must be Full");
    if (p.columns() < 3 || p.sections() < 5) throw error("mollify_param: family too small");
    const double tau_lo = p.tau.front(), tau_hi = p.tau.back();
    if (!(eps > 0) || eps > 0.25 * (tau_hi - tau_lo))
        throw error("mollify_param: eps must be positive and at most a quarter of the tau range");

    auto fam = std::make_shared<detail::MollifiedFamily>();
    fam->s_grid = p.s_grid;

    // resample each section onto a uniform tau grid (monotone linear interpolation,
    // boundary-replicated so the kernel never reaches past the family)
    const int M = tau_resolution;
    const double du = (tau_hi - tau_lo) / (M - 1);
    fam->tau_u.resize(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) fam->tau_u[static_cast<std::size_t>(m)] = tau_lo + m * du;

    const std::size_t S = p.sections();
    std::vector<std::vector<double>> chi_u(static_cast<std::size_t>(M),
                                           std::vector<double>(S));
    {
        std::size_t j = 0;
        for (int m = 0; m < M; ++m) {
            const double u = fam->tau_u[static_cast<std::size_t>(m)];
            while (j + 2 < p.columns() && p.tau[j + 1] <= u) ++j;
            const double a = p.tau[j], b = p.tau[j + 1];
            const double f = (b > a) ? std::min(1.0, std::max(0.0, (u - a) / (b - a))) : 0.0;
            for (std::size_t i = 0; i < S; ++i)
                chi_u[static_cast<std::size_t>(m)][i] =
                    p.chi[j][i] * (1 - f) + p.chi[j + 1][i] * f;
        }
    }

    // normalized bump kernel on the uniform grid
    const int half = std::max(1, static_cast<int>(std::floor(eps / du)));
    std::vector<double> ker(static_cast<std::size_t>(2 * half + 1));
    double ksum = 0;
    for (int q = -half; q <= half; ++q) {
        const double x = q * du / eps;
        const double v = (x * x < 1.0) ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
        ker[static_cast<std::size_t>(q + half)] = v;
        ksum += v;
    }
    for (double& v : ker) v /= ksum;

    fam->chi.assign(static_cast<std::size_t>(M), std::vector<double>(S, 0.0));
    for (int m = 0; m < M; ++m)
        for (int q = -half; q <= half; ++q) {
            const int mq = std::max(0, std::min(M - 1, m + q));
            const double kv = ker[static_cast<std::size_t>(q + half)];
            auto& dst = fam->chi[static_cast<std::size_t>(m)];
            const auto& src = chi_u[static_cast<std::size_t>(mq)];
            for (std::size_t i = 0; i < S; ++i) dst[i] += kv * src[i];
        }

    const double hs = p.flow_h;
    fam->dchi_ds.assign(static_cast<std::size_t>(M), std::vector<double>(S, 0.0));
    for (int m = 0; m < M; ++m) {
        auto& d = fam->dchi_ds[static_cast<std::size_t>(m)];
        const auto& c = fam->chi[static_cast<std::size_t>(m)];
        for (std::size_t i = 0; i < S; ++i) {
            if (i == 0) d[i] = (c[1] - c[0]) / hs;
            else if (i + 1 == S) d[i] = (c[S - 1] - c[S - 2]) / hs;
            else d[i] = (c[i + 1] - c[i - 1]) / (2 * hs);
        }
    }
    fam->flat_tol = 1e-3 * p.domain.height() / (l1_resolution - 1);

    MollifyResult out;
    out.chi_eps = p;
    out.chi_eps.tau = fam->tau_u;
    out.chi_eps.chi.assign(fam->chi.begin(), fam->chi.end());
    out.chi_eps.kind = LagrangianParam::Kind::Full;

    const Domain dom = p.domain;
    const double s0 = p.s_grid.front(), s1 = p.s_grid.back();
    auto fn = [fam, dom, s0, s1, hs](double z, double t) {
        const double zi = std::min(s1, std::max(s0, z));
        std::size_t i = static_cast<std::size_t>(std::lround((zi - s0) / hs));
        if (i >= fam->s_grid.size()) i = fam->s_grid.size() - 1;
        return fam->phi_at(i, t);
    };
    out.phi_eps = ScalarField::native("mollified", fn);

    double acc = 0;
    long cnt = 0;
    for (int a = 0; a < l1_resolution; ++a) {
        const double z = dom.z_lo + dom.width() * a / (l1_resolution - 1);
        for (int b = 0; b < l1_resolution; ++b) {
            const double t = dom.t_lo + dom.height() * b / (l1_resolution - 1);
            acc += std::fabs(out.phi_eps.eval(z, t) - p.phi.eval(z, t));
            ++cnt;
        }
    }
    out.l1_gap = acc / static_cast<double>(cnt) * dom.width() * dom.height();
    return out;
}

}  // namespace ilg
