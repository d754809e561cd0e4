#include <doctest.h>

#include <random>

#include "elliptic.hpp"
#include "qkzb_ops.hpp"

using namespace qkzb;

namespace {
const cplx tau{0.1, 0.9}, p{-0.05, 0.7};
const std::vector<cplx> zs2{{0.12, 0.01}, {-0.17, 0.02}};
}

TEST_CASE("grid indexing") {
    ops::Grid g;
    CHECK(g.size() == 10);
    for (int k = 0; k < 10; ++k) {
        CHECK(g.index(g.node(k)) == k);
        CHECK(g.index(g.node(k) + 2.0) == k);
        CHECK(g.index(g.node(k) - 2.0 * 3.0) == k);
    }
    try {
        g.index(g.eps + 0.05);
        FAIL("expected grid_mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::grid_mismatch);
    }
}

TEST_CASE("grid matrix reproduces the functional action on 2-periodic functions") {
    ops::Grid g;
    cplx eta = 1.0 / (2.0 * g.N);
    wm::HighestWeights w({1, 1});
    auto op = ops::K_op(0, zs2, tau, p, w, eta);
    const int nB = int(op.basis.size());
    std::vector<cplx> amp{{0.3, 0.1}, {-0.7, 0.4}};
    std::vector<int> freq{1, -3};
    ops::Fn f = [=](cplx l) {
        CMat v(nB, 1);
        for (int r = 0; r < nB; ++r) v(r, 0) = amp[size_t(r)] * std::exp(pi * I1 * double(freq[size_t(r)]) * l);
        return v;
    };
    CVec fv(g.size() * nB);
    for (int k = 0; k < g.size(); ++k) fv.segment(k * nB, nB) = f(g.node(k)).col(0);
    CVec gv = ops::grid_matrix(op, g) * fv;
    auto Kf = ops::apply(op, f);
    for (int k = 0; k < g.size(); ++k) {
        CVec direct = Kf(g.node(k)).col(0);
        CHECK((direct - gv.segment(k * nB, nB)).norm() < 1e-12 * std::max(1.0, direct.norm()));
    }
}

TEST_CASE("compatibility of the difference systems") {
    ops::Grid g;
    cplx eta = 1.0 / (2.0 * g.N);
    wm::HighestWeights w({1, 1});
    for (bool vee : {false, true}) CHECK(ops::compatibility_residual(vee, 0, 1, zs2, tau, p, w, eta, g) < 1e-9);
    wm::HighestWeights w3({2, 1, 1});
    std::vector<cplx> zs3{{0.12, 0.01}, {-0.17, 0.02}, {0.31, -0.01}};
    for (int j = 0; j < 3; ++j)
        for (int l = j + 1; l < 3; ++l) CHECK(ops::compatibility_residual(false, j, l, zs3, tau, p, w3, eta, g) < 1e-9);
}

TEST_CASE("mirror relation, inverse and linearity on the grid") {
    ops::Grid g;
    cplx eta = 1.0 / (2.0 * g.N);
    wm::HighestWeights w({1, 1});
    ops::QkzbConfig c{zs2, tau, p, eta, w};
    for (int j = 0; j < 2; ++j) {
        CHECK(ops::mirror_residual(j, zs2, tau, p, w, eta, g) < 1e-9);
        CHECK(ops::inverse_residual(j, c, g) < 1e-10);
        CHECK(ops::linearity_residual(j, c, g, 9) < 1e-13);
    }
    double m = ops::grid_max_entry(c, g);
    CHECK(std::isfinite(m));
    CHECK(m > 0);
}

TEST_CASE("alpha conjugation at generic eta") {
    ops::QkzbConfig c{zs2, tau, p, {0.013, -0.05}, wm::HighestWeights({1, 1})};
    for (int j = 0; j < 2; ++j)
        for (bool vee : {false, true}) CHECK(ops::alpha_conjugation_residual(j, c, vee, 5) < 1e-10);
}

TEST_CASE("D multipliers are alpha ratios") {
    wm::HighestWeights w({1, 1});
    auto basis = wm::zero_weight_basis(w, true);
    cplx eta{0.013, -0.05}, mu{0.2, 0.05};
    CVec d = ops::d_multiplier(0, mu, ops::DKind::D, w, basis, eta);
    CVec dv = ops::d_multiplier(0, mu, ops::DKind::D_vee, w, basis, eta);
    REQUIRE(d.size() == 2);
    REQUIRE(basis[0] == wm::BasisIndex{0, 1});
    cplx ex = ell::alpha(mu + 2.0 * eta, eta) / ell::alpha(mu, eta) * std::exp(-pi * I1 * eta);
    CHECK(std::abs(d(0) - ex) < 1e-14 * std::abs(ex));
    CHECK(std::abs(dv(0) - ell::alpha(mu, eta) / ell::alpha(mu - 2.0 * eta, eta) * std::exp(pi * I1 * eta)) < 1e-14 * std::abs(dv(0)));
}

TEST_CASE("non-integer weights are rejected by the operators") {
    wm::HighestWeights w({0.5, 1.5});
    CHECK_THROWS_AS(ops::K_op(0, zs2, tau, p, w, 0.1), Error);
}
