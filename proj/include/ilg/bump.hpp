#pragma once

#include <cmath>

#include "ilg/domain.hpp"

namespace ilg {

/** Tensor-product bump test function: b(x) = exp(-1/(1-x^2)) for |x|<1, 0 otherwise,
 *  in coordinates rescaled by (center, radii).  Smooth, compactly supported on the
 *  closed box center +- radii, with analytic first partials. */
struct TestFunction {
    double zc = 0, tc = 0;
    double rz = 1, rt = 1;

    TestFunction() = default;
    TestFunction(double zc_, double tc_, double rz_, double rt_)
        : zc(zc_), tc(tc_), rz(rz_), rt(rt_) {
        if (rz <= 0 || rt <= 0) throw error("TestFunction: radii must be positive");
    }

    struct Eval {
        double value = 0, dz = 0, dt = 0;
    };

    static double b(double x) {
        const double x2 = x * x;
        return x2 < 1.0 ? std::exp(-1.0 / (1.0 - x2)) : 0.0;
    }
    static double db(double x) {
        const double x2 = x * x;
        if (x2 >= 1.0) return 0.0;
        const double u = 1.0 - x2;
        return std::exp(-1.0 / u) * (-2.0 * x / (u * u));
    }

    Eval operator()(double z, double t) const {
        const double x = (z - zc) / rz, y = (t - tc) / rt;
        if (x * x >= 1.0 || y * y >= 1.0) return {};
        Eval e;
        const double bx = b(x), by = b(y);
        e.value = bx * by;
        e.dz = db(x) / rz * by;
        e.dt = bx * db(y) / rt;
        return e;
    }

    bool support_inside(const Domain& dom) const {
        return zc - rz >= dom.z_lo && zc + rz <= dom.z_hi &&
               tc - rt >= dom.t_lo && tc + rt <= dom.t_hi;
    }
};

inline TestFunction::Eval bump_eval(const TestFunction& tf, const GraphPoint& p) {
    return tf(p.zn(1), p.t);
}

}  // namespace ilg
