#pragma once

#include <cmath>
#include <functional>

#include "ilg/domain.hpp"

namespace ilg {

/** Composite Simpson over [a,b] with panel width <= step (even subdivision count). */
template <class F>
double simpson(F&& f, double a, double b, double step) {
    if (b <= a) return 0.0;
    int n = static_cast<int>(std::ceil((b - a) / step));
    if (n < 2) n = 2;
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

/** Composite Simpson with a fixed odd node count (npts >= 3). */
template <class F>
double simpson_n(F&& f, double a, double b, int npts) {
    if (npts < 3) throw error("simpson_n: need npts >= 3");
    if (npts % 2 == 0) ++npts;
    const int n = npts - 1;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace ilg
