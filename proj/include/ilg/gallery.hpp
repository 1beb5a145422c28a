#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ilg/domain.hpp"
#include "ilg/field.hpp"

namespace ilg {

/** A named benchmark pair (phi, w) with its domain and, where a canonical pointwise
 *  representative exists, the expected w-hat and the set where branches disagree. */
struct GalleryInstance {
    std::string name;
    ScalarField phi, w;
    std::optional<ScalarField> w_hat_expected;
    std::function<bool(double z, double t)> w_hat_multivalued;  // expected disagreement set
    Domain domain;
    std::string notes;
    double w_sup = 0;
    std::vector<double> markers;  // block nodes of the staircase instance (t-ordinates)
};

namespace detail {

/** Staircase field built from rescaled copies of gamma(u) = u + sin(2 pi u - pi)/(2 pi):
 *  super-interval i in {1..imax} sits between nodes
 *      node_i = -sum_{j<=i} 2^-j / ln(j+2),
 *  split into 2^i blocks of height 2^-2i/ln(i+2); on each block phi(t) = gamma'(u)/
 *  (2^i ln(i+2)) and w(t) = gamma''(u)/ln(i+2) at the unique u with block(u) = t.
 *  phi depends on t alone; (phi, w) solves the balance law with phi_z = 0.  Blocks are
 *  materialized to i <= imax and the field vanishes beyond. */
struct Staircase {
    static constexpr int imax = 12;
    std::vector<double> nodes;  // nodes[0] = 0 down to nodes[imax]

    Staircase() {
        nodes.push_back(0.0);
        for (int j = 1; j <= imax; ++j)
            nodes.push_back(nodes.back() - std::pow(2.0, -j) / std::log(j + 2.0));
    }

    static double g(double u) { return u + std::sin(2 * M_PI * u - M_PI) / (2 * M_PI); }
    static double dg(double u) { return 1 + std::cos(2 * M_PI * u - M_PI); }
    static double ddg(double u) { return -2 * M_PI * std::sin(2 * M_PI * u - M_PI); }

    struct Block {
        int i = 0;
        double lo = 0, hi = 0;
        double scale = 0;  // 2^{2i} ln(i+2)
    };

    std::optional<Block> block_of(double t) const {
        if (t >= nodes[0] || t <= nodes[imax]) return std::nullopt;
        for (int i = 1; i <= imax; ++i) {
            if (t >= nodes[static_cast<std::size_t>(i)]) {
                const double w = std::pow(2.0, -2 * i) / std::log(i + 2.0);
                int h = static_cast<int>((nodes[static_cast<std::size_t>(i - 1)] - t) / w);
                h = std::min(h, (1 << i) - 1);
                Block b;
                b.i = i;
                b.hi = nodes[static_cast<std::size_t>(i - 1)] - w * h;
                b.lo = b.hi - w;
                b.scale = std::pow(2.0, 2 * i) * std::log(i + 2.0);
                return b;
            }
        }
        return std::nullopt;
    }

    /** Invert g on [0,1] by bisection to 1e-12. */
    static double g_inv(double y) {
        y = std::fmin(1.0, std::fmax(0.0, y));
        double a = 0.0, b = 1.0;
        while (b - a > 1e-12) {
            const double m = 0.5 * (a + b);
            (g(m) < y ? a : b) = m;
        }
        return 0.5 * (a + b);
    }

    double phi(double t) const {
        const auto b = block_of(t);
        if (!b) return 0.0;
        const double u = g_inv((t - b->lo) * b->scale);
        return dg(u) * std::pow(2.0, b->i) / b->scale;  // = dg(u) / (2^i ln(i+2))
    }
    double w(double t) const {
        const auto b = block_of(t);
        if (!b) return 0.0;
        const double u = g_inv((t - b->lo) * b->scale);
        return ddg(u) / std::log(b->i + 2.0);
    }
};

inline const Staircase& staircase() {
    static const Staircase s;
    return s;
}

}  // namespace detail

inline std::vector<std::string> gallery_names() {
    return {"ex1", "ex2_collapse", "ex2_split", "appendixA2"};
}

inline GalleryInstance gallery(const std::string& name) {
    GalleryInstance gi;
    gi.name = name;
    gi.w_hat_multivalued = [](double, double) { return false; };
    if (name == "ex1" || name == "ex2_collapse" || name == "ex2_split") {
        gi.domain = Domain(0, 1, -1, 1);
        gi.w = ScalarField::analytic("sign(t)/2").with_bound(0.5);
        gi.w_sup = 0.5;
        gi.w_hat_expected = gi.w;
        if (name == "ex1") {
            gi.phi = ScalarField::analytic("sqrt(abs(t))").with_bound(1.0);
            gi.notes = "square-root profile; characteristics fan out of the t-axis and "
                       "merge onto it; the pointwise source vanishes on the axis";
        } else if (name == "ex2_collapse") {
            gi.phi = ScalarField::analytic("-sign(t)*sqrt(abs(t))").with_bound(1.0);
            gi.notes = "odd square-root profile; characteristics collapse onto the axis "
                       "from both sides";
        } else {
            gi.phi = ScalarField::analytic("sign(t)*sqrt(abs(t))").with_bound(1.0);
            gi.notes = "odd square-root profile with splitting characteristics: the two "
                       "parabolic branches out of each axis point force a multivalued "
                       "pointwise source on the axis";
            gi.w_hat_multivalued = [](double, double t) { return std::fabs(t) < 1e-9; };
        }
        return gi;
    }
    if (name == "appendixA2") {
        const auto& st = detail::staircase();
        gi.domain = Domain(0, 1, st.nodes.back(), 0.0);
        const double phi_bound = 1.0 / std::log(3.0) + 1e-9;        // 2^{1-i}/ln(i+2), i = 1
        const double w_bound = 2 * M_PI / std::log(3.0) + 1e-9;
        gi.phi = ScalarField::native(
            "staircase_phi", [](double, double t) { return detail::staircase().phi(t); },
            phi_bound);
        gi.w = ScalarField::native(
            "staircase_w", [](double, double t) { return detail::staircase().w(t); },
            w_bound);
        gi.w_sup = 2 * M_PI / std::log(3.0);
        gi.w_hat_expected = gi.w;
        gi.markers = st.nodes;
        gi.notes = "z-independent staircase of smooth blocks accumulating at the bottom "
                   "edge; minimal curves park on a dense node set, so any full monotone "
                   "parameterisation loses Lipschitz regularity";
        return gi;
    }
    std::string names;
    for (const auto& n : gallery_names()) names += (names.empty() ? "" : ", ") + n;
    throw config_error("unknown gallery instance '" + name + "' (valid: " + names + ")");
}

}  // namespace ilg
