#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ilg/field.hpp"
#include "ilg/flow.hpp"
#include "ilg/gallery.hpp"
#include "ilg/flow.hpp"
#include "ilg/param.hpp"
#include "ilg/theta.hpp"

using namespace ilg;

namespace {

Characteristic const_curve(double v) {
    Characteristic c;
    c.h = 1e-2;
    c.gamma.assign(101, v);
    return c;
}

Characteristic fn_curve(double (*f)(double)) {
    Characteristic c;
    c.h = 1e-3;
    c.gamma.resize(1001);
    for (std::size_t i = 0; i < c.gamma.size(); ++i) c.gamma[i] = f(c.s_at(i));
    return c;
}

}  // namespace

TEST_CASE("rational enumeration order") {
    const auto rs = rational_enumeration(9);
    const std::vector<double> want = {0.0, 1.0, 0.5, 0.25, 0.75, 0.125, 0.375, 0.625, 0.875};
    CHECK(rs == want);
}

TEST_CASE("theta on constant curves") {
    CHECK(theta_encode(const_curve(0.0), 30) == 0.0);
    // geometric sum: sum_{k=0}^{30} 2^-k = 2 - 2^-30
    CHECK(theta_encode(const_curve(1.0), 30) == 2.0 - std::pow(2.0, -30));
}

TEST_CASE("theta of the identity curve: brute-force oracle and frozen value") {
    const Characteristic id = fn_curve([](double s) { return s; });
    // oracle: direct summation over the explicit enumeration
    const auto rs = rational_enumeration(21);
    double oracle = 0;
    for (std::size_t k = 0; k < rs.size(); ++k) oracle += std::pow(2.0, -static_cast<double>(k)) * rs[k];
    const double got = theta_encode(id, 20);
    CHECK(got == Catch::Approx(oracle).margin(1e-12));
    CHECK(got == Catch::Approx(0.7219068109989166).margin(1e-12));
}

TEST_CASE("theta order preservation on an ordered family") {
    // gamma_c(s) = c * s + 0.1: strictly ordered in c
    std::vector<double> thetas;
    for (double c = -0.1; c <= 0.1; c += 0.01) {
        Characteristic cv;
        cv.h = 1e-2;
        cv.gamma.resize(101);
        for (std::size_t i = 0; i < cv.gamma.size(); ++i) cv.gamma[i] = c * cv.s_at(i) + 0.1;
        thetas.push_back(theta_encode(cv, 30));
    }
    for (std::size_t i = 1; i < thetas.size(); ++i) CHECK(thetas[i] > thetas[i - 1]);
}

TEST_CASE("theta requires full range coverage") {
    Characteristic c;
    c.h = 1e-2;
    c.s_begin = 0.25;
    c.gamma.assign(10, 0.0);
    CHECK_THROWS_AS(theta_encode(c, 10), error);
}

TEST_CASE("minimal param on constant fields") {
    const Domain dom(0, 1, 0, 1);
    FlowOptions opts;
    opts.h = 5e-3;

    const ScalarField zero = ScalarField::analytic("0");
    LagrangianParam p0 = build_minimal_param(zero, dom, 11, opts);
    // chi(s, tau) = launch value = tau (domain is the unit square)
    for (std::size_t j = 0; j < p0.columns(); ++j)
        for (std::size_t i = 0; i < p0.sections(); i += 50)
            CHECK(p0.chi[j][i] == Catch::Approx(p0.tau[j]).margin(2e-4));

    const ScalarField one = ScalarField::analytic("1");
    LagrangianParam p1 = build_minimal_param(one, dom, 11, opts);
    // interior columns: chi(s, tau) = tau + s while inside the rectangle
    for (std::size_t j = 0; j < p1.columns(); ++j)
        for (std::size_t i = 0; i < p1.sections(); i += 50) {
            const double expect = p1.tau[j] + p1.s_grid[i];
            if (expect < 0.95)
                CHECK(p1.chi[j][i] == Catch::Approx(expect).margin(2e-3));
        }
}

TEST_CASE("minimal param of ex1: the zero column stays on the axis") {
    const GalleryInstance gi = gallery("ex1");
    FlowOptions opts;
    opts.h = 2e-3;
    LagrangianParam p = build_minimal_param(gi.phi, gi.domain, 41, opts);
    // tau = 0.5 launches at t = 0; its minimal forward curve is the axis
    const std::size_t j = 20;
    REQUIRE(p.tau[j] == Catch::Approx(0.5));
    for (std::size_t i = 0; i < p.sections(); i += 25)
        CHECK(std::fabs(p.chi[j][i]) <= 1e-3);
    CHECK(p.monotone_violation() == 0.0);
}

TEST_CASE("full param on the zero field") {
    const Domain dom(0, 1, 0, 1);
    FlowOptions opts;
    opts.h = 5e-3;
    const ScalarField zero = ScalarField::analytic("0");
    LagrangianParam p = build_full_param(zero, dom, 17, opts);
    CHECK(p.kind == LagrangianParam::Kind::Full);
    CHECK(p.monotone_violation() == 0.0);
    CHECK(p.tau.front() >= 0.0);
    CHECK(p.tau.back() <= 2.0);
    CHECK(p.max_section_gap <= 2.0 / 16);
}

TEST_CASE("full param of the splitting instance keeps both parabolas") {
    const GalleryInstance gi = gallery("ex2_split");
    FlowOptions opts;
    opts.h = 2e-3;
    LagrangianParam p = build_full_param(gi.phi, gi.domain, 33, opts);
    CHECK(p.kind == LagrangianParam::Kind::Full);
    CHECK(p.monotone_violation() == 0.0);
    CHECK(p.tau.front() >= 0.0);
    CHECK(p.tau.back() <= 2.0);

    // both branches +-s^2/4 out of the origin must be present with distinct tau
    double best_up = 1e9, best_dn = 1e9;
    double tau_up = -1, tau_dn = -1;
    for (std::size_t j = 0; j < p.columns(); ++j) {
        double du = 0, dd = 0;
        for (std::size_t i = 0; i < p.sections(); i += 10) {
            const double s = p.s_grid[i];
            du = std::max(du, std::fabs(p.chi[j][i] - s * s / 4));
            dd = std::max(dd, std::fabs(p.chi[j][i] + s * s / 4));
        }
        if (du < best_up) { best_up = du; tau_up = p.tau[j]; }
        if (dd < best_dn) { best_dn = dd; tau_dn = p.tau[j]; }
    }
    CHECK(best_up <= 5e-3);
    CHECK(best_dn <= 5e-3);
    CHECK(tau_dn < tau_up);
}

TEST_CASE("full param of ex1: section coverage") {
    const GalleryInstance gi = gallery("ex1");
    FlowOptions opts;
    opts.h = 2e-3;
    LagrangianParam p = build_full_param(gi.phi, gi.domain, 33, opts);
    CHECK(p.kind == LagrangianParam::Kind::Full);
    CHECK(p.max_section_gap <= 2.0 * gi.domain.height() / 32);
    // theta order preservation on the stored family (strict somewhere => strict theta)
    std::size_t strict = 0;
    for (std::size_t j = 1; j < p.columns(); ++j) {
        CHECK(p.tau[j] > p.tau[j - 1]);
        ++strict;
    }
    CHECK(strict >= 100);
}

TEST_CASE("param lip profile") {
    const Domain dom(0, 1, 0, 1);
    const ScalarField zero = ScalarField::analytic("0");
    FlowOptions opts;
    opts.h = 5e-3;
    LagrangianParam p = build_minimal_param(zero, dom, 21, opts);
    // chi(s, tau) = tau: profile = 1 at every section
    CHECK(param_lip_profile(p, 0.5) == Catch::Approx(1.0).margin(1e-6));

    LagrangianParam single = p;
    single.tau.resize(1);
    single.chi.resize(1);
    CHECK_THROWS_AS(param_lip_profile(single, 0.5), error);
}

TEST_CASE("columns satisfy the characteristic consistency bound") {
    const GalleryInstance gi = gallery("ex1");
    FlowOptions opts;
    opts.h = 2e-3;
    LagrangianParam p = build_minimal_param(gi.phi, gi.domain, 21, opts);
    for (std::size_t j = 0; j < p.columns(); j += 4) {
        const auto& col = p.chi[j];
        for (std::size_t i = 0; i + 1 < col.size(); i += 7) {
            const double d = std::fabs(col[i + 1] - col[i] -
                                       opts.h * p.phi_work.eval(p.s_grid[i], col[i]));
            CHECK(d <= (p.consistency_C + 1e-9) * opts.h * opts.h);
        }
    }
}
