#include <doctest.h>

#include "elliptic.hpp"
#include "semiclassical.hpp"

using namespace qkzb;

TEST_CASE("default eta sequence") {
    semi::SemiOptions o;
    auto e = o.resolved_etas();
    REQUIRE(e.size() == 5);
    CHECK(std::abs(e[0] - cplx(0, -0.02)) < 1e-15);
    for (size_t k = 1; k < e.size(); ++k) CHECK(std::abs(e[k] / e[k - 1] - 0.5) < 1e-15);
}

TEST_CASE("expansion of the difference equation near eta = 0") {
    auto r = semi::semiclassical_residual();
    CHECK(r.g0_max_error < 1e-4);
    CHECK(r.c_spread < 1e-2);
    CHECK(r.slope_min > 1.8);
    CHECK(r.slope_max < 2.2);
    CHECK(r.residue_split < 1e-8);
    REQUIRE(r.omega_tilde_dev.size() == r.etas.size());
    for (size_t k = 1; k < r.omega_tilde_dev.size(); ++k) CHECK(r.omega_tilde_dev[k] < r.omega_tilde_dev[k - 1]);
    CHECK(r.omega_tilde_dev.back() < 1e-3);
    auto j = semi::to_json(r);
    for (const char* k : {"eta_sequence", "points", "v0_max_error", "c_spread", "slope_range", "residue_split",
                          "omega_tilde_deviation"})
        CHECK(j.contains(k));
}

TEST_CASE("Gaussian test integral has a quadratic remainder") {
    semi::SemiOptions o;
    double first = 0;
    double s = semi::gaussian_asymptotic_slope({0.47, 0.0}, o.resolved_etas(), &first);
    CHECK(s > 1.9);
    CHECK(s < 2.1);
    CHECK(first < 0.1);
}

TEST_CASE("heat operator reduces theta squared to a multiple of itself") {
    cplx tau{0.1, 0.9};
    semi::Fn2 v = [](cplx l, cplx t) {
        cplx x = ell::th(l, t);
        return x * x;
    };
    std::vector<cplx> ratios;
    for (cplx l : {cplx(0.21, 0.03), cplx(0.37, -0.02), cplx(-0.14, 0.05)})
        ratios.push_back(semi::kzb_heat_apply(4, v, l, tau) / v(l, tau));
    for (cplx r : ratios) CHECK(std::abs(r - ratios[0]) < 1e-5 * std::abs(ratios[0]));
}

TEST_CASE("invalid eta sequences") {
    semi::SemiOptions o;
    o.etas = {{0, -0.02}, {0, -0.01}};
    CHECK_THROWS_AS(semi::semiclassical_residual(o), Error);
    o.etas = {{0, -0.01}, {0, -0.02}, {0, -0.005}};
    try {
        semi::semiclassical_residual(o);
        FAIL("expected invalid_config");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_config);
    }
}
