#include <doctest.h>

#include "elliptic.hpp"
#include "shapovalov.hpp"

using namespace qkzb;

namespace {
const cplx tau{0.1, 0.9}, pm{-0.05, 0.7}, eta{0.013, -0.05};
const std::vector<cplx> zs2{{0.12, 0.01}, {-0.17, 0.02}};
const wm::HighestWeights w11({1, 1});

ops::Fn scalar(std::function<cplx(cplx)> v) {
    return [v](cplx m) {
        CMat r(1, 1);
        r(0, 0) = v(m);
        return r;
    };
}
}

TEST_CASE("Q_k hand values") {
    cplx mu{0.21, 0.04};
    auto th = [](cplx x) { return ell::theta(x, tau); };
    cplx tp = ell::thp(0.0, tau);
    CHECK(shap::q_single(0, 2, mu, tau, eta) == cplx(1.0));
    cplx q1 = tp / th(2.0 * eta) * th(4.0 * eta) * th(2.0 * eta) / (th(mu + 2.0 * eta) * th(mu - 2.0 * eta));
    CHECK(std::abs(shap::q_single(1, 2, mu, tau, eta) - q1) < 1e-13 * std::abs(q1));
    // vanishes past the top of the finite module
    CHECK(std::abs(shap::q_single(2, 1, mu, tau, eta)) < 1e-13);
    CHECK(std::abs(shap::q_index({0, 1}, mu, tau, w11, eta)) > 0);
}

TEST_CASE("Gaussian along the integration path") {
    shap::IntegrationPath path;
    cplx g = shap::integrate_path(eta, path, [](cplx m) { return ell::alpha(m, eta); });
    CHECK(std::abs(g * g - (-4.0 * I1 * eta)) < 1e-10 * std::abs(eta));
    CHECK(shap::default_tmax(eta) > 0);
    CHECK(shap::default_tmax(eta, 90) > shap::default_tmax(eta));
}

TEST_CASE("pairing does not depend on the path offset") {
    ops::Fn f = [](cplx m) {
        CMat r(2, 1);
        r << std::exp(0.2 * m), std::exp(-0.1 * m) * (1.0 + 0.3 * m);
        return r;
    };
    ops::Fn g = [](cplx m) {
        CMat r(2, 1);
        r << std::exp(-0.25 * m) * (1.0 - 0.1 * m), std::exp(0.15 * m);
        return r;
    };
    shap::IntegrationPath path;
    cplx ref = shap::shapovalov_pair(f, g, tau, w11, eta, path);
    for (double k : {1.0, -1.0, 2.0}) {
        shap::IntegrationPath pk = path;
        pk.offset += 2.0 * eta * k;
        CHECK(std::abs(shap::shapovalov_pair(f, g, tau, w11, eta, pk) - ref) < 1e-10 * std::abs(ref));
    }
}

TEST_CASE("heat operator for one point equals its single-integral form") {
    auto v = [](cplx m) { return std::exp(0.3 * m) * (1.0 + 0.2 * m); };
    shap::HeatT T({0.0}, tau, pm, wm::HighestWeights({2}), eta, scalar(v), {}, shap::heat_constant_n1(eta));
    for (cplx lam : {cplx(0.23, 0.07), cplx(-0.31, 0.02)}) {
        cplx a = T(lam)(0), b = shap::heat_T_explicit_n1(lam, tau, pm, eta, v);
        CHECK(std::abs(a - b) < 1e-10 * std::abs(b));
    }
}

TEST_CASE("heat operator intertwines the difference operators") {
    for (int j = 0; j < 2; ++j) {
        CHECK(shap::heat_intertwining_residual(j, zs2, tau, pm, w11, eta, 1) < 1e-5);
        CHECK(shap::heat_vee_intertwining_residual(j, zs2, tau, pm, w11, eta, 1) < 1e-5);
        CHECK(shap::adjointness_residual(j, false, zs2, tau, pm, w11, eta, 3) < 1e-6);
        CHECK(shap::adjointness_residual(j, true, zs2, tau, pm, w11, eta, 3) < 1e-6);
    }
    for (int L = 1; L <= 2; ++L)
        for (int M = 1; M <= 2; ++M) CHECK(shap::r_symmetry_residual(L, M, {0.27, 0.03}, {0.21, 0.04}, tau, eta) < 1e-8);
}

TEST_CASE("finite heat operator") {
    ops::Grid g;
    for (int j = 0; j < 2; ++j) CHECK(shap::finite_heat_intertwining_residual(j, zs2, tau, pm, g, w11) < 1e-8);
    CHECK(shap::tn_periodicity_residual(zs2, tau, pm, g, w11) < 1e-8);
    CMat T = shap::heat_TN(zs2, tau, pm, g, w11);
    CHECK(T.rows() == g.size() * 2);
    CHECK(T.allFinite());
}

TEST_CASE("Gauss sums") {
    for (int N = 1; N <= 12; ++N) {
        cplx direct = 0;
        for (int k = 0; k < 2 * N; ++k) direct += std::exp(-pi * I1 * double(k) * double(k) / (2.0 * N));
        CHECK(std::abs(shap::gauss_sum(N) - direct) < 1e-12 * std::sqrt(double(N)));
    }
    CHECK(std::abs(shap::gauss_sum(4) - cplx(2, -2)) < 1e-13);
}

TEST_CASE("composition of the kernels is a constant multiple of the identity") {
    auto r = shap::composition_constant({0.0}, tau, pm, wm::HighestWeights({2}), eta,
                                        {{{0.23, 0.07}, {0.31, -0.05}}, {{-0.1, 0.02}, {0.4, 0.01}}});
    CHECK(r.spread < 1e-6);
    // the measured constant is the reciprocal of the reference value
    CHECK(r.rel_to_inverse < 1e-8);
}

TEST_CASE("rational limit constant") {
    auto rr = shap::rational_constant(3, tau, pm);
    CHECK(rr.residual_measured < 1e-10);
    cplx ratio = rr.measured / rr.CN;
    CHECK(std::abs(ratio - 1.0 / (2 * pi)) < 1e-8);
    CHECK(shap::regular_eta_variation(3, {0.23, 0.07}, {0.31, -0.05}, tau, pm) < 1e-3);
}
