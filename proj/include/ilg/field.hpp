#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ilg/domain.hpp"
#include "ilg/expr.hpp"

namespace ilg {

/** A continuous scalar field on the plane, playing the role of phi or w.
 *
 *  Three backing kinds:
 *    - Analytic: an expression tree (see expr.hpp), defined wherever the expression is;
 *    - Sampled:  node values on a uniform lattice over a Domain, bilinear in between
 *                (exact at nodes); evaluation clamps to the lattice rectangle;
 *    - Native:   an opaque callable, for fields with no closed form (appendix gallery).
 *
 *  Fields are immutable after construction and cheap to copy (shared backing).
 *  `bound` caches a supremum-norm estimate; when present, every evaluation asserts
 *  |value| <= bound and a violation throws.
 */
class ScalarField {
  public:
    enum class Kind { Analytic, Sampled, Native };

    ScalarField() = default;

    static ScalarField analytic(const std::string& text) {
        ScalarField f;
        f.kind_ = Kind::Analytic;
        f.expr_ = parse_expr(text);
        f.text_ = text;
        return f;
    }

    static ScalarField sampled(const Domain& dom, int nz, int nt, std::vector<double> values) {
        if (nz < 2 || nt < 2) throw error("ScalarField::sampled: lattice needs nz, nt >= 2");
        if (values.size() != static_cast<std::size_t>(nz) * static_cast<std::size_t>(nt))
            throw error("ScalarField::sampled: value count != nz*nt");
        ScalarField f;
        f.kind_ = Kind::Sampled;
        f.grid_ = std::make_shared<Grid>(Grid{dom, nz, nt, std::move(values)});
        double b = 0;
        for (double v : f.grid_->values) b = std::max(b, std::fabs(v));
        f.bound_ = b;
        f.text_ = "sampled";
        return f;
    }

    static ScalarField native(std::string name, std::function<double(double, double)> fn,
                              std::optional<double> bound = std::nullopt) {
        ScalarField f;
        f.kind_ = Kind::Native;
        f.fn_ = std::make_shared<std::function<double(double, double)>>(std::move(fn));
        f.text_ = std::move(name);
        f.bound_ = bound;
        return f;
    }

    /** Sampled field from CSV with header `z,t,value`, row-major lattice (z outer, t inner). */
    static ScalarField from_csv(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open field CSV: " + path);
        std::string line;
        if (!std::getline(in, line)) throw config_error("empty field CSV: " + path);
        std::vector<double> zs, ts, vs;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            double z, t, v;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &z, &t, &v) != 3)
                throw config_error("bad CSV row in " + path + ": " + line);
            zs.push_back(z); ts.push_back(t); vs.push_back(v);
        }
        if (vs.size() < 4) throw config_error("field CSV too small: " + path);
        std::vector<double> uz(zs), ut(ts);
        std::sort(uz.begin(), uz.end()); uz.erase(std::unique(uz.begin(), uz.end()), uz.end());
        std::sort(ut.begin(), ut.end()); ut.erase(std::unique(ut.begin(), ut.end()), ut.end());
        const int nz = static_cast<int>(uz.size()), nt = static_cast<int>(ut.size());
        if (static_cast<std::size_t>(nz) * nt != vs.size())
            throw config_error("field CSV is not a full lattice: " + path);
        std::vector<double> grid(vs.size());
        for (std::size_t k = 0; k < vs.size(); ++k) {
            auto iz = std::lower_bound(uz.begin(), uz.end(), zs[k]) - uz.begin();
            auto it = std::lower_bound(ut.begin(), ut.end(), ts[k]) - ut.begin();
            grid[static_cast<std::size_t>(iz) * nt + it] = vs[k];
        }
        Domain dom(uz.front(), uz.back(), ut.front(), ut.back());
        return sampled(dom, nz, nt, std::move(grid));
    }

    Kind kind() const { return kind_; }
    const std::string& text() const { return text_; }
    std::optional<double> bound() const { return bound_; }
    ScalarField& with_bound(double b) { bound_ = b; return *this; }

    double eval(double z, double t) const {
        double v;
        switch (kind_) {
            case Kind::Analytic: v = expr_->eval(z, t); break;
            case Kind::Sampled: v = grid_->bilinear(z, t); break;
            case Kind::Native: v = (*fn_)(z, t); break;
            default: throw error("ScalarField: empty field");
        }
        if (!std::isfinite(v)) throw eval_error("field evaluated to non-finite value", z, t);
        if (bound_ && std::fabs(v) > *bound_ * (1.0 + 1e-12) + 1e-300)
            throw eval_error("field value exceeds its cached bound", z, t);
        return v;
    }

    double operator()(double z, double t) const { return eval(z, t); }

    const Domain* sampled_domain() const { return grid_ ? &grid_->dom : nullptr; }

  private:
    struct Grid {
        Domain dom;
        int nz, nt;
        std::vector<double> values;  // row-major, z outer

        double bilinear(double z, double t) const {
            const double pad = 1e-9 * (dom.width() + dom.height());
            if (!dom.contains(z, t, pad))
                throw eval_error("point outside the sampled domain", z, t);
            const double x = (dom.clamp_z(z) - dom.z_lo) / dom.width() * (nz - 1);
            const double y = (dom.clamp_t(t) - dom.t_lo) / dom.height() * (nt - 1);
            int i = std::min(static_cast<int>(x), nz - 2);
            int j = std::min(static_cast<int>(y), nt - 2);
            const double fx = x - i, fy = y - j;
            auto at = [&](int a, int b) {
                return values[static_cast<std::size_t>(a) * nt + b];
            };
            return (1 - fx) * ((1 - fy) * at(i, j) + fy * at(i, j + 1)) +
                   fx * ((1 - fy) * at(i + 1, j) + fy * at(i + 1, j + 1));
        }
    };

    Kind kind_ = Kind::Analytic;
    ExprPtr expr_;
    std::shared_ptr<Grid> grid_;
    std::shared_ptr<std::function<double(double, double)>> fn_;
    std::optional<double> bound_;
    std::string text_;
};

inline double eval_field(const ScalarField& f, const GraphPoint& p, int n = 1) {
    return f.eval(p.zn(n), p.t);
}

/** Lattice estimate of sup |f| over the closed rectangle, resolution points per axis.
 *  Nondecreasing under lattice refinement r -> 2r-1 (nested nodes). */
inline double sup_norm(const ScalarField& f, const Domain& dom, int resolution) {
    if (resolution < 2) throw error("sup_norm: resolution must be >= 2");
    double m = 0;
    for (int i = 0; i < resolution; ++i) {
        const double z = dom.z_lo + dom.width() * i / (resolution - 1);
        for (int j = 0; j < resolution; ++j) {
            const double t = dom.t_lo + dom.height() * j / (resolution - 1);
            m = std::max(m, std::fabs(f.eval(z, t)));
        }
    }
    return m;
}

}  // namespace ilg
