#pragma once

#include <cmath>
#include <vector>

#include "ilg/domain.hpp"
#include "ilg/flow.hpp"

namespace ilg {

/** The fixed enumeration of Q cap [0,1] used by theta: endpoints first, then dyadics by
 *  level:  0, 1, 1/2, 1/4, 3/4, 1/8, 3/8, 5/8, 7/8, ...  (count values in total). */
inline std::vector<double> rational_enumeration(int count) {
    std::vector<double> rs;
    rs.reserve(static_cast<std::size_t>(count));
    if (count >= 1) rs.push_back(0.0);
    if (count >= 2) rs.push_back(1.0);
    for (long denom = 2; static_cast<int>(rs.size()) < count; denom *= 2)
        for (long num = 1; num < denom && static_cast<int>(rs.size()) < count; num += 2)
            rs.push_back(static_cast<double>(num) / static_cast<double>(denom));
    return rs;
}

/** Truncated order parameter theta(gamma) = sum_{k=0..K} 2^-k gamma(r_k), with the
 *  enumeration above mapped affinely onto the curve's abscissa range [lo, hi].
 *  Strictly order preserving on ordered curve families; truncation error is bounded by
 *  2^{-K+1} sup|gamma| (not added). */
inline double theta_encode(const Characteristic& curve, int K,
                           double range_lo, double range_hi) {
    if (K < 1) throw error("theta_encode: K must be >= 1");
    if (!(range_lo < range_hi)) throw error("theta_encode: bad range");
    if (!curve.covers(range_lo, curve.h) || !curve.covers(range_hi, curve.h))
        throw error("theta_encode: curve does not cover the full range");
    const auto rs = rational_enumeration(K + 1);
    double acc = 0, pw = 1;
    for (double r : rs) {
        const double s = std::fmin(curve.s_end(), std::fmax(curve.s_begin,
                                   range_lo + r * (range_hi - range_lo)));
        acc += pw * curve.value_at(s);
        pw *= 0.5;
    }
    return acc;
}

/** Convenience overload for curves on the normalized range [0,1]. */
inline double theta_encode(const Characteristic& curve, int K) {
    return theta_encode(curve, K, 0.0, 1.0);
}

}  // namespace ilg
