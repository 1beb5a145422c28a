#pragma once

#include <cmath>

#include "ilg/bump.hpp"
#include "ilg/domain.hpp"
#include "ilg/field.hpp"

namespace ilg {

struct Residual {
    double raw = 0;      // R = int int [ phi d_z tf + phi^2/2 d_t tf + w tf ]
    double c1_mass = 0;  // int int [ |tf| + |d_z tf| + |d_t tf| ], same lattice
    double relative() const { return c1_mass > 0 ? std::fabs(raw) / c1_mass : std::fabs(raw); }
};

/** Weak-form residual of the balance law against one bump, composite Simpson on a
 *  quad_res x quad_res lattice over the bump support.  Zero (to quadrature error) for
 *  distributional solutions, O(bump mass) otherwise. */
inline Residual distributional_residual(const ScalarField& phi, const ScalarField& w,
                                        const TestFunction& tf, const Domain& dom,
                                        int quad_res = 129) {
    if (quad_res < 16) throw error("distributional_residual: quad_res must be >= 16");
    if (!tf.support_inside(dom))
        throw error("distributional_residual: bump support exits the domain");
    int n = quad_res;
    if (n % 2 == 0) ++n;

    const double za = tf.zc - tf.rz, zb = tf.zc + tf.rz;
    const double ta = tf.tc - tf.rt, tb = tf.tc + tf.rt;
    const double hz = (zb - za) / (n - 1), ht = (tb - ta) / (n - 1);
    auto wgt = [n](int i) { return (i == 0 || i == n - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0); };

    Residual r;
    for (int a = 0; a < n; ++a) {
        const double z = za + a * hz;
        for (int b = 0; b < n; ++b) {
            const double t = ta + b * ht;
            const auto e = tf(z, t);
            const double cw = wgt(a) * wgt(b) * (hz / 3.0) * (ht / 3.0);
            const double p = phi.eval(z, t);
            r.raw += cw * (p * e.dz + 0.5 * p * p * e.dt + w.eval(z, t) * e.value);
            r.c1_mass += cw * (std::fabs(e.value) + std::fabs(e.dz) + std::fabs(e.dt));
        }
    }
    return r;
}

}  // namespace ilg
