#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ilg/field.hpp"
#include "ilg/gallery.hpp"
#include "ilg/lagrangian_source.hpp"
#include "ilg/mollify.hpp"
#include "ilg/param.hpp"

using namespace ilg;

TEST_CASE("mollify the identity family: phi stays zero") {
    const Domain dom(0, 1, 0, 1);
    FlowOptions opts;
    opts.h = 5e-3;
    const ScalarField zero = ScalarField::analytic("0");
    LagrangianParam p = build_full_param(zero, dom, 17, opts);
    const MollifyResult m = mollify_param(p, 0.05);
    CHECK(m.l1_gap <= 2e-4);
    for (double t : {0.2, 0.5, 0.8})
        CHECK(std::fabs(m.phi_eps.eval(0.5, t)) <= 2e-4);
}

TEST_CASE("mollify ex1: shrinking eps shrinks the L1 gap") {
    const GalleryInstance gi = gallery("ex1");
    FlowOptions opts;
    opts.h = 2e-3;
    LagrangianParam p = build_full_param(gi.phi, gi.domain, 33, opts);
    double prev = 1e300;
    for (double eps : {0.1, 0.05, 0.025}) {
        const MollifyResult m = mollify_param(p, eps);
        CHECK(m.l1_gap < prev);
        prev = m.l1_gap;
    }
}

TEST_CASE("mollify: defining relation d_s chi_eps = phi_eps on the family") {
    const GalleryInstance gi = gallery("ex1");
    FlowOptions opts;
    opts.h = 2e-3;
    LagrangianParam p = build_full_param(gi.phi, gi.domain, 33, opts);
    const MollifyResult m = mollify_param(p, 0.05);
    const auto& q = m.chi_eps;
    std::size_t checked = 0;
    for (std::size_t j = 0; j < q.columns(); j += 64) {
        for (std::size_t i = 2; i + 2 < q.sections(); i += 100) {
            const double t = q.chi[j][i];
            if (t <= gi.domain.t_lo || t >= gi.domain.t_hi) continue;
            const double ds = (q.chi[j][i + 1] - q.chi[j][i - 1]) / (2 * q.flow_h);
            const double pe = m.phi_eps.eval(q.s_grid[i], t);
            CHECK(std::fabs(ds - pe) <= 2 * q.flow_h + 1e-3);
            ++checked;
        }
    }
    CHECK(checked >= 20);
}

TEST_CASE("mollify guards") {
    const Domain dom(0, 1, 0, 1);
    FlowOptions opts;
    opts.h = 5e-3;
    const ScalarField zero = ScalarField::analytic("0");
    LagrangianParam p = build_full_param(zero, dom, 17, opts);
    CHECK_THROWS_AS(mollify_param(p, 10.0), error);   // eps too large
    LagrangianParam partial = p;
    partial.kind = LagrangianParam::Kind::Partial;
    CHECK_THROWS_AS(mollify_param(partial, 0.05), error);
}

TEST_CASE("lagrangian source on straight lines vanishes") {
    const Domain dom(0, 1, 0, 3);
    FlowOptions opts;
    opts.h = 5e-3;
    const ScalarField one = ScalarField::analytic("1");
    LagrangianParam p = build_full_param(one, dom, 17, opts);
    const LagrangianSource src = lagrangian_source(p, 17, 10.0);
    for (int iz = 0; iz < 17; ++iz)
        for (int it = 0; it < 17; ++it) {
            if (src.at(iz, it) != LagrangianSource::Assigned) continue;
            const double z = iz / 16.0, t = 3.0 * it / 16.0;
            CHECK(std::fabs(src.w_chi.eval(z, t)) <= 1e-6);
        }
}

TEST_CASE("lagrangian source of ex1: signs off the axis, zero on it") {
    const GalleryInstance gi = gallery("ex1");
    FlowOptions opts;
    opts.h = 2e-3;
    LagrangianParam p = build_full_param(gi.phi, gi.domain, 33, opts);
    const int res = 33;
    const LagrangianSource src = lagrangian_source(p, res, 1.0);
    const double dz = gi.domain.width() / (res - 1), dt = gi.domain.height() / (res - 1);
    int hits = 0;
    for (int iz = 1; iz + 1 < res; ++iz) {
        for (int it = 0; it < res; ++it) {
            const double t = gi.domain.t_lo + it * dt;
            const double z = gi.domain.z_lo + iz * dz;
            const auto cell = src.at(iz, it);
            if (cell == LagrangianSource::Unreached) continue;
            const double v = src.w_chi.eval(z, t);
            if (std::fabs(t) < 0.5 * dt) {
                // axis row: value from the collapsed axis curve
                CHECK(std::fabs(v) <= 5e-3);
            } else if (std::fabs(t) > 2 * dt && cell == LagrangianSource::Assigned) {
                CHECK(v == Catch::Approx(t > 0 ? 0.5 : -0.5).margin(0.05));
                ++hits;
            }
        }
    }
    CHECK(hits >= 100);

    // multivalued cells may appear only on the axis row
    for (int iz = 0; iz < res; ++iz)
        for (int it = 0; it < res; ++it)
            if (src.at(iz, it) == LagrangianSource::Multivalued) {
                const double t = gi.domain.t_lo + it * dt;
                CHECK(std::fabs(t) <= 0.5 * dt);
            }
}

TEST_CASE("lagrangian source of the splitting instance flags the axis") {
    const GalleryInstance gi = gallery("ex2_split");
    FlowOptions opts;
    opts.h = 2e-3;
    LagrangianParam p = build_full_param(gi.phi, gi.domain, 33, opts);
    const int res = 33;
    const LagrangianSource src = lagrangian_source(p, res, 1.0);
    // the axis row meets curves with second derivative +-1/2 and 0: flagged multivalued
    int flagged = 0;
    const int axis_row = (res - 1) / 2;
    for (int iz = 2; iz + 2 < res; ++iz)
        if (src.at(iz, axis_row) == LagrangianSource::Multivalued) ++flagged;
    CHECK(flagged >= (res - 8) / 2);
}

TEST_CASE("lagrangian source precondition: columns must be Lipschitz") {
    const GalleryInstance gi = gallery("ex1");
    FlowOptions opts;
    opts.h = 2e-3;
    LagrangianParam p = build_full_param(gi.phi, gi.domain, 17, opts);
    CHECK_THROWS_AS(lagrangian_source(p, 17, 1e-9), error);
}
