#include <doctest.h>

#include "elliptic.hpp"
#include "hyperfun.hpp"

using namespace qkzb;

namespace {
const cplx tau{0.1, 0.9}, pm{-0.05, 0.7}, eta{0.013, -0.05};
const cplx lam{0.23, 0.07}, mu{0.31, -0.05};
const std::vector<cplx> z1{0.0};
const wm::HighestWeights w2({2});

cplx th(cplx t) { return ell::theta(t, tau); }
}

TEST_CASE("contour separates its pole families") {
    std::vector<cplx> zs{{0.12, 0.01}, {-0.17, 0.02}};
    auto fam = hyp::families(zs, {1, 1}, eta, tau, pm);
    REQUIRE(!fam.upper.empty());
    REQUIRE(!fam.lower.empty());
    auto c = hyp::build_contour(fam.upper, fam.lower);
    auto inside = [&](cplx x) {
        for (const auto& ci : c.circles)
            if (std::abs(x - ci.center) < ci.radius) return ci.orientation;
        return 0;
    };
    for (cplx u : fam.upper) CHECK((u.imag() > c.height || inside(u) != 0));
    for (cplx l : fam.lower) CHECK((l.imag() < c.height || inside(l) != 0));
    for (size_t a = 0; a < c.circles.size(); ++a) {
        CHECK(std::abs(c.circles[a].center.imag() - c.height) > c.circles[a].radius);
        for (size_t b = a + 1; b < c.circles.size(); ++b)
            CHECK(std::abs(c.circles[a].center - c.circles[b].center) > c.circles[a].radius + c.circles[b].radius);
    }
    CHECK(c.nodes.size() == c.weights.size());
}

TEST_CASE("contour JSON round trip") {
    auto fam = hyp::families(z1, {2}, eta, tau, pm);
    auto c = hyp::build_contour(fam.upper, fam.lower);
    auto d = hyp::contour_from_json(hyp::contour_to_json(c));
    CHECK(d.height == c.height);
    CHECK(d.circles.size() == c.circles.size());
    REQUIRE(d.nodes.size() == c.nodes.size());
    for (size_t k = 0; k < c.nodes.size(); ++k) {
        CHECK(std::abs(d.nodes[k] - c.nodes[k]) < 1e-15);
        CHECK(std::abs(d.weights[k] - c.weights[k]) < 1e-15);
    }
}

TEST_CASE("one-variable weight functions") {
    std::vector<cplx> zs{{0.12, 0.01}, {-0.17, 0.02}};
    std::vector<double> Ls{1, 2};
    cplx t{0.07, 0.11};
    cplx w10 = hyp::weight_fn({1, 0}, {t}, zs, lam, tau, Ls, eta);
    cplx e10 = th(lam + t - zs[0] - eta * Ls[0] + 2.0 * eta) / th(t - zs[0] - eta * Ls[0]);
    CHECK(std::abs(w10 - e10) < 1e-13 * std::abs(e10));
    cplx w01 = hyp::weight_fn({0, 1}, {t}, zs, lam, tau, Ls, eta);
    cplx e01 = th(t - zs[0] + eta * Ls[0]) / th(t - zs[0] - eta * Ls[0]) *
               th(lam + t - zs[1] - eta * Ls[1] + 2.0 * eta - 2.0 * eta * Ls[0]) / th(t - zs[1] - eta * Ls[1]);
    CHECK(std::abs(w01 - e01) < 1e-13 * std::abs(e01));
    CHECK_THROWS_AS(hyp::weight_fn({1, 1}, {t}, zs, lam, tau, Ls, eta), Error);
}

TEST_CASE("hypergeometric function solves the difference system") {
    for (auto s : {hyp::Shift::p_shift, hyp::Shift::tau_shift, hyp::Shift::unit})
        CHECK(hyp::qkzb_system_residual(s, 0, z1, lam, mu, tau, pm, w2, eta) < 1e-6);
}

TEST_CASE("quadrature is converged and contour independent") {
    CHECK(hyp::doubling_residual(z1, lam, mu, tau, pm, w2, eta) < 1e-9);
    CHECK(hyp::contour_shift_residual(z1, lam, mu, tau, pm, w2, eta) < 1e-10);
    CHECK(hyp::sigma_translation_residual(mu, tau, tau - 4.0 * eta, eta) < 1e-8);
}

TEST_CASE("true solution multipliers") {
    CHECK(hyp::multiplier_z_residual({1}, 0, mu, z1, lam, tau, pm, w2, eta) < 1e-8);
    CHECK(hyp::multiplier_lambda_residual({1}, mu, z1, lam, tau, pm, w2, eta) < 1e-8);
}

TEST_CASE("torus region excludes dominant weights") {
    CHECK_FALSE(hyp::in_convergent_region({2}, eta, tau, pm));
    CHECK_FALSE(hyp::in_convergent_region({1, 1}, eta, tau, pm));
    CHECK(hyp::in_convergent_region({-1}, eta, tau, pm));
    CHECK_THROWS_AS(hyp::universal_u_torus(z1, lam, mu, tau, pm, {2}, 1, eta), Error);
}

TEST_CASE("kernel is limited to one integration variable") {
    try {
        hyp::UKernel k(z1, tau, pm, wm::HighestWeights({4}), eta);
        FAIL("expected not_implemented");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::not_implemented);
    }
}
