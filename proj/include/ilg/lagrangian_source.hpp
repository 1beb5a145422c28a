#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ilg/along.hpp"
#include "ilg/domain.hpp"
#include "ilg/field.hpp"
#include "ilg/param.hpp"

namespace ilg {

struct LagrangianSource {
    ScalarField w_chi;                // Sampled on the lattice
    std::vector<std::uint8_t> mask;   // per node: see Cell
    int res_z = 0, res_t = 0;
    enum Cell : std::uint8_t { Unreached = 0, Assigned = 1, Multivalued = 2 };

    std::uint8_t at(int iz, int it) const {
        return mask[static_cast<std::size_t>(iz) * res_t + it];
    }
};

/** Borel source of the Lagrangian formulation: second s-derivatives of the columns,
 *  pushed to the omega-lattice through Upsilon(s,tau) = (s, chi(s,tau)).
 *
 *  Each lattice node keeps the value of the sample whose ordinate lies closest to the
 *  node (the best available representative of the node itself); nodes receiving values
 *  that differ beyond flag_tol from several columns are flagged Multivalued, and nodes
 *  no curve passes get value 0 and stay marked Unreached. */
inline LagrangianSource lagrangian_source(const LagrangianParam& p, int resolution = 65,
                                          double lip_bound = std::numeric_limits<double>::infinity(),
                                          double flag_tol = 0.05) {
    if (p.kind != LagrangianParam::Kind::Full)
        throw error("lagrangian_source: parameterisation must be Full");
    for (std::size_t j = 0; j < p.columns(); j += std::max<std::size_t>(1, p.columns() / 64)) {
        const double lip = lipschitz_along(p.phi_work, p.column_curve(j));
        if (lip > lip_bound)
            throw error("lagrangian_source: column " + std::to_string(j) +
                        " is not Lipschitz within the stated bound (got " +
                        std::to_string(lip) + ")");
    }

    const Domain& dom = p.domain;
    const int rz = resolution, rt = resolution;
    const double dz = dom.width() / (rz - 1), dt = dom.height() / (rt - 1);
    std::vector<double> value(static_cast<std::size_t>(rz) * rt, 0.0);
    std::vector<double> dist(static_cast<std::size_t>(rz) * rt,
                             std::numeric_limits<double>::infinity());
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(rz) * rt,
                                   LagrangianSource::Unreached);

    const double h = p.flow_h;
    for (std::size_t j = 0; j < p.columns(); ++j) {
        const auto& col = p.chi[j];
        const std::size_t aj = j < p.anchor.size() ? p.anchor[j] : 0;
        auto d2_at = [&](std::size_t i) {
            return (col[i + 1] - 2 * col[i] + col[i - 1]) / (h * h);
        };
        for (std::size_t i = 2; i + 2 < col.size(); ++i) {
            // the splice sample at the launch anchor carries the eps-ladder slope kink
            if (i + 1 >= aj && i <= aj + 1) continue;
            // windows reaching into the padding strip see the tapered field, not phi
            if (col[i - 2] < dom.t_lo || col[i - 2] > dom.t_hi ||
                col[i + 2] < dom.t_lo || col[i + 2] > dom.t_hi)
                continue;
            const double d2 = d2_at(i);
            // an isolated spike disagreeing with both neighbors samples the measure-zero
            // kink locus (or a monotone-repair touchup), not the Borel source
            if (std::fabs(d2 - d2_at(i - 1)) > 0.1 && std::fabs(d2 - d2_at(i + 1)) > 0.1)
                continue;
            const double s = p.s_grid[i], t = col[i];
            const int iz = static_cast<int>(std::lround((s - dom.z_lo) / dz));
            const int it = static_cast<int>(std::lround((t - dom.t_lo) / dt));
            if (iz < 0 || iz >= rz || it < 0 || it >= rt) continue;
            const std::size_t k = static_cast<std::size_t>(iz) * rt + it;
            const double dd = std::fabs(t - (dom.t_lo + it * dt));
            if (mask[k] != LagrangianSource::Unreached &&
                std::fabs(d2 - value[k]) > flag_tol)
                mask[k] = LagrangianSource::Multivalued;
            else if (mask[k] == LagrangianSource::Unreached)
                mask[k] = LagrangianSource::Assigned;
            if (dd < dist[k]) {
                dist[k] = dd;
                value[k] = d2;
            }
        }
    }

    LagrangianSource out;
    out.res_z = rz;
    out.res_t = rt;
    out.mask = std::move(mask);
    out.w_chi = ScalarField::sampled(dom, rz, rt, std::move(value));
    return out;
}

}  // namespace ilg
