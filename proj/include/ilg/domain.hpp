#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace ilg {

/** Base error for everything thrown by the library. */
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/** Evaluation failed at a concrete point (out of domain, undefined expression). */
struct eval_error : error {
    double z = 0, t = 0;
    eval_error(const std::string& msg, double z_, double t_)
        : error(msg + " at (" + std::to_string(z_) + ", " + std::to_string(t_) + ")"),
          z(z_), t(t_) {}
};

struct config_error : error {
    explicit config_error(const std::string& msg) : error(msg) {}
};

/** A point A = (z, t) of the graph domain; z has length 2n-1, a single real for n = 1. */
struct GraphPoint {
    std::vector<double> z;
    double t = 0;

    GraphPoint() = default;
    GraphPoint(double z1, double t_) : z{z1}, t(t_) {}
    GraphPoint(std::vector<double> z_, double t_) : z(std::move(z_)), t(t_) {}

    /** The distinguished coordinate z_n for Heisenberg index n (1-based paper indexing). */
    double zn(int n) const { return z.at(static_cast<std::size_t>(n) - 1); }
};

/** Axis-aligned planar rectangle (z_lo,z_hi) x (t_lo,t_hi); z is the abscissa along
 *  characteristics, t the ordinate.  For n >= 2 the remaining 2n-2 coordinates of a
 *  section are frozen in frozen_coords. */
struct Domain {
    double z_lo = 0, z_hi = 1;
    double t_lo = 0, t_hi = 1;
    int n = 1;
    std::vector<double> frozen_coords;

    Domain() = default;
    Domain(double zl, double zh, double tl, double th, int n_ = 1,
           std::vector<double> frozen = {})
        : z_lo(zl), z_hi(zh), t_lo(tl), t_hi(th), n(n_), frozen_coords(std::move(frozen)) {
        validate();
    }

    void validate() const {
        if (!(z_lo < z_hi) || !(t_lo < t_hi))
            throw error("Domain: need z_lo < z_hi and t_lo < t_hi");
        if (n < 1) throw error("Domain: n must be a positive integer");
        const std::size_t want = (n == 1) ? 0 : static_cast<std::size_t>(2 * n - 2);
        if (frozen_coords.size() != want)
            throw error("Domain: frozen_coords must have length " + std::to_string(want));
    }

    double width() const { return z_hi - z_lo; }
    double height() const { return t_hi - t_lo; }

    bool contains(double z, double t, double pad = 0.0) const {
        return z >= z_lo - pad && z <= z_hi + pad && t >= t_lo - pad && t <= t_hi + pad;
    }
    double clamp_t(double t) const { return std::fmin(t_hi, std::fmax(t_lo, t)); }
    double clamp_z(double z) const { return std::fmin(z_hi, std::fmax(z_lo, z)); }
};

}  // namespace ilg
