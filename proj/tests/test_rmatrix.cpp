#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rmatrix.hpp"

using namespace qkzb;

namespace {
const cplx tau{0.1, 0.9}, eta{0.013, -0.05};
}

TEST_CASE("fundamental R matches the hand-expanded entries") {
    cplx z{0.21, 0.03}, l{0.33, 0.02};
    using oracle::theta;
    cplx d = theta(z - 2.0 * eta, tau) * theta(l, tau);
    CMat R = rmat::r11(z, l, tau, eta);
    CHECK(std::abs(R(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(R(3, 3) - 1.0) < 1e-15);
    CHECK(oracle::rel(R(1, 1), theta(z, tau) * theta(l + 2.0 * eta, tau) / d) < 1e-12);
    CHECK(oracle::rel(R(2, 2), theta(z, tau) * theta(l - 2.0 * eta, tau) / d) < 1e-12);
    CHECK(oracle::rel(R(1, 2), -theta(2.0 * eta, tau) * theta(l + z, tau) / d) < 1e-12);
    CHECK(oracle::rel(R(2, 1), -theta(2.0 * eta, tau) * theta(l - z, tau) / d) < 1e-12);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (a != b && !((a == 1 && b == 2) || (a == 2 && b == 1))) CHECK(R(a, b) == cplx(0.0));
    CHECK(rmat::r_fused(1, 1, z, l, tau, eta).isApprox(R));
}

TEST_CASE("unitarity and dynamical Yang-Baxter") {
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    auto c = [&] { return cplx(U(g), 0.2 * U(g)); };
    for (int k = 0; k < 20; ++k) {
        CHECK(rmat::unitarity_residual(1, 1, c(), c(), tau, eta) < 1e-11);
        CHECK(rmat::dybe_residual({1, 1, 1}, {c(), c(), c()}, c(), tau, eta) < 1e-11);
    }
    for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 2}, {2, 1}, {2, 2}})
        CHECK(rmat::unitarity_residual(a, b, c(), c(), tau, eta) < 1e-9);
    for (const auto& W : std::vector<std::array<int, 3>>{{2, 1, 1}, {1, 2, 1}, {1, 1, 2}, {2, 2, 2}})
        CHECK(rmat::dybe_residual(W, {c(), c(), c()}, c(), tau, eta) < 1e-9);
}

TEST_CASE("weight preservation and fusion stays in the symmetric subspace") {
    for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 1}}) {
        CHECK(rmat::weight_commutator_residual(a, b, {0.21, 0.03}, {0.33, 0.02}, tau, eta) == 0.0);
        double leak = 1;
        rmat::r_fused(a, b, {0.21, 0.03}, {0.33, 0.02}, tau, eta, &leak);
        CHECK(leak < 1e-12);
    }
}

TEST_CASE("R(z + tau) relation holds in the product reading only") {
    cplx z{0.21, 0.03}, l{0.33, 0.02};
    for (int L = 1; L <= 2; ++L)
        for (int M = 1; M <= 2; ++M) CHECK(rmat::tau_shift_residual(L, M, z, l, tau, eta) < 1e-9);
    CHECK(rmat::tau_shift_residual(1, 1, z, l, tau, eta, rmat::TauShiftReading::none) > 1e-3);
    CHECK(rmat::tau_shift_residual(1, 1, z, l, tau, eta, rmat::TauShiftReading::sum) > 1e-3);
    CHECK(std::string(rmat::reading_name(rmat::TauShiftReading::product)) == "product");
}

TEST_CASE("regular at 2 eta = 1/N") {
    for (int N : {3, 5})
        for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {2, 2}}) {
            double r = rmat::regularity_probe(a, b, N, {0.21, 0.03}, {0.33, 0.02}, tau);
            CHECK(r < 1e-3);
        }
}

TEST_CASE("elliptic factorial and errors") {
    CHECK(rmat::elliptic_factorial(0, tau, eta) == cplx(1.0));
    CHECK(std::abs(rmat::elliptic_factorial(1, tau, eta) - 1.0) < 1e-15);
    cplx e2 = rmat::elliptic_factorial(2, tau, eta);
    CHECK(oracle::rel(e2, oracle::theta(4.0 * eta, tau) / oracle::theta(2.0 * eta, tau)) < 1e-12);
    CHECK_THROWS_AS(rmat::r_fused(0, 1, 0.1, 0.2, tau, eta), Error);
    try {
        rmat::elliptic_factorial(3, tau, cplx(1.0 / 6.0));
        FAIL("expected fusion_singular");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::fusion_singular);
    }
    CHECK_THROWS_AS(rmat::r11(2.0 * eta, 0.3, tau, eta), Error);
}
