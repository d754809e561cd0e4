#include <doctest.h>

#include <random>

#include "shapovalov.hpp"
#include "weights.hpp"

using namespace qkzb;

TEST_CASE("single slot zero-weight space") {
    for (int L = 0; L <= 8; ++L) {
        if (L % 2) {
            CHECK_THROWS_AS(wm::HighestWeights({double(L)}), Error);
            continue;
        }
        auto b = wm::zero_weight_basis(wm::HighestWeights({double(L)}), true);
        REQUIRE(b.size() == 1);
        CHECK(b[0][0] == L / 2);
    }
}

TEST_CASE("basis enumeration is lexicographic and weight zero") {
    wm::HighestWeights w({1, 2, 1});
    auto inf = wm::zero_weight_basis(w, false);
    auto fin = wm::zero_weight_basis(w, true);
    CHECK(inf.size() == 6);
    CHECK(std::is_sorted(inf.begin(), inf.end()));
    for (const auto& I : fin) {
        double wt = 0;
        for (int k = 0; k < w.n(); ++k) wt += wm::slot_weight(I, w, k);
        CHECK(wt == 0.0);
        CHECK(wm::is_admissible(I, w));
    }
    // (2,0,0) and (0,0,2) exceed the first and last slots
    CHECK(fin.size() == 4);
    CHECK(wm::zero_weight_basis(wm::HighestWeights({0.5, 1.5}), false).size() == 2);
    CHECK_THROWS_AS(wm::zero_weight_basis(wm::HighestWeights({0.5, 1.5}), true), Error);
}

TEST_CASE("flip is a linear involution") {
    wm::HighestWeights w({1, 3, 2});
    auto basis = wm::zero_weight_basis(w, false);
    std::mt19937_64 g(3);
    std::normal_distribution<double> N;
    wm::ZeroWeightVector v, u;
    for (const auto& I : basis) {
        v[I] = {N(g), N(g)};
        u[I] = {N(g), N(g)};
    }
    auto back = wm::flip_P(wm::flip_P(v, w), w.reversed());
    for (const auto& I : basis) CHECK(back[I] == v[I]);
    wm::ZeroWeightVector s;
    for (const auto& I : basis) s[I] = 2.0 * v[I] - u[I];
    auto fs = wm::flip_P(s, w), fv = wm::flip_P(v, w), fu = wm::flip_P(u, w);
    auto wr = w.reversed();
    for (const auto& [J, x] : fs) {
        CHECK(std::abs(x - (2.0 * fv[J] - fu[J])) < 1e-15);
        double wt = 0;
        for (int k = 0; k < wr.n(); ++k) wt += wm::slot_weight(J, wr, k);
        CHECK(wt == 0.0);
    }
    auto P = wm::flip_matrix(basis, wm::zero_weight_basis(wr, false));
    CHECK((P * P.transpose()).isIdentity());
}

TEST_CASE("admissible indices are where Shapovalov weights are nonzero") {
    cplx mu{0.21, 0.04}, tau{0.1, 0.9}, eta{0.013, -0.05};
    for (const auto& Ls : std::vector<std::vector<double>>{{1, 1}, {2, 2}, {2, 1, 1}, {1, 3}}) {
        wm::HighestWeights w(Ls);
        auto basis = wm::zero_weight_basis(w, false);
        double mx = 0;
        for (const auto& I : basis) mx = std::max(mx, std::abs(shap::q_index(I, mu, tau, w, eta)));
        for (const auto& I : basis)
            CHECK(wm::is_admissible(I, w) == (std::abs(shap::q_index(I, mu, tau, w, eta)) > 1e-12 * mx));
    }
}

TEST_CASE("weights must sum to an even integer") {
    CHECK_THROWS_AS(wm::HighestWeights({1, 2}), Error);
    CHECK_THROWS_AS(wm::HighestWeights(std::vector<double>{}), Error);
    CHECK(wm::HighestWeights({1, 2, 3}).m() == 3);
    CHECK_FALSE(wm::HighestWeights({0.5, 1.5}).integral());
}
