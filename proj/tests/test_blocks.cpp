#include <doctest.h>

#include "blocks.hpp"
#include "elliptic.hpp"

using namespace qkzb;
using namespace qkzb::blk;

namespace {
const cplx tau{0.1, 0.9}, eta{0.004, -0.03};
const std::vector<cplx> pts{{0.13, 0.04}, {-0.27, 0.02}};
}

TEST_CASE("theta functions of level kappa solve the heat identity") {
    for (int j = 0; j < 4; ++j) CHECK(theta_identity_residual(j, 4, eta, tau, {0.21, 0.05}) < 1e-12);
}

TEST_CASE("dimension count") {
    CHECK(dim_E(4, 0) == 3);
    CHECK(dim_E(5, 1) == 2);
    CHECK(dim_E(6, 1) == 3);
    for (auto [k, m] : std::vector<std::pair<int, int>>{{4, 0}, {5, 1}, {6, 1}}) {
        auto r = dim_E_numeric(k, m, eta, tau);
        CHECK(r.nullity == dim_E(k, m));
        REQUIRE(int(r.basis.size()) == r.nullity);
        for (const auto& f : r.basis) CHECK(membership_residual(k, m, eta, tau, f) < 1e-9);
    }
}

TEST_CASE("membership detects a non-member") {
    Fn1 f = [](cplx l) { return ell::th(l, tau) * ell::th(l, tau); };
    CHECK(membership_residual(5, 1, eta, tau, f) > 1e-3);
}

TEST_CASE("heat operator maps the space at sigma into the space at tau") {
    cplx sig = tau - 10.0 * eta;
    Fn1 v = [=](cplx l) { return ell::th(l, sig) * ell::th(l - 2.0 * eta, sig) * ell::theta_level<double>(0, 1, l, sig); };
    CHECK(membership_residual(5, 1, eta, sig, v) < 1e-9);
    HeatTKappaM T(5, 1, eta, tau, v);
    CHECK(std::abs(T.sigma() - sig) < 1e-15);
    CHECK(membership(5, 1, eta, tau, T.fn()).max() < 1e-6);
    CHECK(v_heat_assembly_residual(5, eta, tau, v, pts) < 1e-6);
}

TEST_CASE("input modulus conventions") {
    CHECK(std::abs(input_modulus(5, eta, tau, PConvention::shifted) - (tau - 10.0 * eta)) < 1e-15);
    CHECK(std::abs(input_modulus(5, eta, tau, PConvention::literal) - (2.0 * tau - 10.0 * eta)) < 1e-15);
}

TEST_CASE("V kernel residues") {
    cplx sig = tau - 10.0 * eta;
    for (auto [r, s] : std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {-1, 0}, {0, -1}})
        CHECK(v_residue_residual(r, s, {0.17, 0.02}, tau, sig, eta) < 1e-9);
    CHECK(std::abs(residue([](cplx z) { return 3.0 / (z - 0.1); }, 0.1) - 3.0) < 1e-12);
}

TEST_CASE("M kernels") {
    CHECK(kernel_m0_residual(4, eta, tau, pts) < 1e-10);
    CHECK(kernel_m1_ratio_spread(5, eta, tau, {{{0.13, 0.04}, {0.2, 0.01}}, {{-0.27, 0.02}, {0.05, -0.03}}}) < 1e-10);
    try {
        MKernel M(3, tau, tau, eta);
        FAIL("expected not_implemented");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::not_implemented);
    }
}

TEST_CASE("modular cocycle") {
    ModularElement S(0, -1, 1, 0), T(1, 1, 0, 1), G(2, 1, 1, 1);
    CHECK_THROWS_AS(ModularElement(1, 1, 1, 1), Error);
    auto ST = S * T;
    CHECK(ST.a * ST.d - ST.b * ST.c == 1);
    CHECK(std::abs(S.act(tau) + 1.0 / tau) < 1e-15);
    CHECK(cocycle_residual(S, T, 3, tau, PsiReading::ctau) < 1e-12);
    CHECK(cocycle_residual(G, S, 3, tau, PsiReading::ctau) < 1e-12);
    CHECK(section_rule_residual(G, 3, tau, PsiReading::ctau) < 1e-9);
    double other = std::max(cocycle_residual(S, T, 3, tau, PsiReading::clambda), cocycle_residual(G, S, 3, tau, PsiReading::clambda));
    CHECK(other > 1e-2);
}

TEST_CASE("horizontal sections of the connection") {
    cplx l{0.21, 0.05};
    for (int j = 0; j < 3; ++j) {
        auto sec = horizontal_section(j, 4);
        double sc = std::abs(sec(l, tau));
        auto n = kzb_connection(4, 0, sec, l, tau);
        CHECK_FALSE(n.unstable);
        CHECK(std::abs(n.value) / sc < 1e-8);
    }
    auto sec = horizontal_section(1, 4);
    CHECK(std::abs(kzb_connection(4, 0, sec, l, tau, EtaTerm::literal).value) / std::abs(sec(l, tau)) > 1e-2);
}
