#include <doctest.h>

#include "elliptic.hpp"
#include "oracles.hpp"

using namespace qkzb;

namespace {
const cplx tau{0.1, 0.9};
}

TEST_CASE("theta matches the brute-force series") {
    CHECK(oracle::rel(ell::th(0.3, {0.0, 0.8}), oracle::theta(0.3, {0.0, 0.8})) < 1e-12);
    for (cplx t : {cplx(0.17, 0.3), cplx(-0.41, -0.6), cplx(2.3, 1.1), cplx(0.05, 2.0)})
        CHECK(oracle::rel(ell::th(t, tau), oracle::theta(t, tau)) < 1e-12);
}

TEST_CASE("theta vanishes at the origin and is odd") {
    CHECK(std::abs(ell::th(0.0, tau)) < 1e-15);
    for (cplx t : {cplx(0.2, 0.1), cplx(-0.33, 0.4)}) {
        CHECK(std::abs(ell::th(-t, tau) + ell::th(t, tau)) < 1e-14);
        CHECK(std::abs(ell::th(t + 1.0, tau) + ell::th(t, tau)) < 1e-14);
    }
}

TEST_CASE("theta quasi-periodicity") {
    cplx t{0.21, -0.13};
    CHECK(oracle::rel(ell::th(t + 2.0, tau), ell::th(t, tau)) < 1e-13);
    CHECK(oracle::rel(ell::th(t + 2.0 * tau, tau), std::exp(-4.0 * pi * I1 * (t + tau)) * ell::th(t, tau)) < 1e-13);
}

TEST_CASE("theta' against a central difference and evenness") {
    const double h = 1e-6;
    for (cplx t : {cplx(0.0), cplx(0.2, 0.1), cplx(-0.37, 0.25)}) {
        cplx fd = (ell::th(t + h, tau) - ell::th(t - h, tau)) / (2 * h);
        CHECK(std::abs(ell::thp(t, tau) - fd) < 1e-8 * std::max(1.0, std::abs(fd)));
        CHECK(oracle::rel(ell::thp(-t, tau), ell::thp(t, tau)) < 1e-13);
    }
    CHECK(std::abs(ell::thp(0.0, tau)) > 0.1);
}

TEST_CASE("weierstrass p against the csc^2 series") {
    for (cplx t : {cplx(0.2, 0.1), cplx(0.37, -0.2), cplx(-0.11, 0.33)}) {
        CHECK(oracle::rel(ell::weierstrass_p<double>(t, tau), oracle::wp(t, tau)) < 1e-11);
        CHECK(oracle::rel(ell::weierstrass_p<double>(-t, tau), ell::weierstrass_p<double>(t, tau)) < 1e-12);
    }
    for (int k = 2; k <= 4; ++k) {
        double t = std::pow(10.0, -k);
        CHECK(std::abs(t * t * ell::weierstrass_p<double>(t, tau) - 1.0) < 10 * t * t);
    }
    CHECK_THROWS_AS(ell::weierstrass_p<double>(cplx(0.0), tau), Error);
    CHECK_THROWS_AS(ell::weierstrass_p<double>(1.0 + tau, tau), Error);
}

TEST_CASE("wp-theta identity at the sample point") {
    cplx t{0.2, 0.1}, l{0.37, 0.0}, ti{0.0, 0.9};
    cplx d1 = ell::thp(0.0, ti);
    cplx lhs = ell::th(t + l, ti) * ell::th(t - l, ti) / (std::pow(ell::th(t, ti), 2) * std::pow(ell::th(l, ti), 2));
    cplx rhs = (ell::weierstrass_p<double>(l, ti) - ell::weierstrass_p<double>(t, ti)) / (d1 * d1);
    CHECK(oracle::rel(lhs, rhs) < 1e-10);
}

TEST_CASE("dedekind eta") {
    CHECK(std::abs(ell::dedekind_eta<double>(I1) - 0.76822542232605665) < 1e-14);
    CHECK(oracle::rel(ell::dedekind_eta<double>(tau), oracle::eta_product(tau)) < 1e-14);
    cplx big{0.2, 6.0};
    CHECK(oracle::rel(ell::dedekind_eta<double>(big), std::exp(I1 * pi * big / 12.0)) < 1e-15);
    ell::Truncation t2;
    t2.product_terms = 2 * ell::default_truncation().product_terms;
    CHECK(std::abs(ell::dedekind_eta<double>(tau, t2) - ell::dedekind_eta<double>(tau)) < 1e-16);
    const double h = 1e-5;
    cplx fd = (std::log(ell::dedekind_eta<double>(tau + h)) - std::log(ell::dedekind_eta<double>(tau - h))) / (2 * h);
    CHECK(std::abs(ell::dedekind_eta_logderiv<double>(tau) - fd) < 1e-8);
    CHECK_THROWS_AS(ell::dedekind_eta<double>(cplx(0.1, -0.2)), Error);
}

TEST_CASE("Omega product") {
    cplx t0{0.0, 0.9}, p0{0.0, 0.7}, eta{0.0, -0.05};
    CHECK(std::abs(ell::Omega(0.0, 0.13, t0, p0) - 1.0) < 1e-15);
    cplx a = 2.0 * eta, z = 0.13;
    CHECK(oracle::rel(ell::Omega(a, z, t0, p0), ell::Omega(a, z, p0, t0)) < 1e-14);
    cplx lhs = ell::Omega(a, z + p0, t0, p0) / ell::Omega(a, z, t0, p0);
    cplx rhs = e2pi(a) * ell::th(z + a, t0) / ell::th(z - a, t0);
    CHECK(oracle::rel(lhs, rhs) < 1e-10);
    CHECK(oracle::rel(ell::omega_phase<double>(a, z, t0, p0), ell::Omega(a, z, t0, p0)) == 0.0);
    try {
        ell::Omega(0.1, -0.1, t0, p0);
        FAIL("expected a singular-parameter error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::singular);
    }
}

TEST_CASE("alpha gauss") {
    cplx eta{0.013, -0.05};
    CHECK(ell::alpha(0.0, eta) == cplx(1.0));
    CHECK(oracle::rel(ell::alpha({0.3, 0.1}, eta), ell::alpha({-0.3, -0.1}, eta)) < 1e-15);
    double prev = 2;
    for (int k = 1; k < 40; ++k) {
        double m = std::abs(ell::alpha(2.0 * eta * double(k), eta));
        CHECK(m < prev);
        prev = m;
    }
    CHECK_THROWS_AS(ell::alpha(0.2, 0.0), Error);
}

TEST_CASE("theta functions of level kappa") {
    cplx l{0.21, 0.05};
    for (int kappa : {1, 3, 4})
        for (int j = 0; j < 2 * kappa; ++j) {
            cplx v = ell::theta_level<double>(j, kappa, l, tau);
            CHECK(oracle::rel(v, oracle::theta_level(j, kappa, l, tau)) < 1e-13);
            CHECK(oracle::rel(ell::theta_level<double>(j, kappa, -l, tau), ell::theta_level<double>(-j, kappa, l, tau)) < 1e-13);
            CHECK(oracle::rel(ell::theta_level<double>(j + 2 * kappa, kappa, l, tau), v) == 0.0);
            const double h = 1e-4;
            cplx dt = (ell::theta_level<double>(j, kappa, l, tau + I1 * h) - ell::theta_level<double>(j, kappa, l, tau - I1 * h)) /
                      (2.0 * I1 * h);
            cplx d2 = ell::theta_level_series<double>(j, kappa, l, tau, 2);
            CHECK(std::abs(2.0 * pi * I1 * double(kappa) * dt - d2) < 1e-6 * std::max(1.0, std::abs(d2)));
        }
}

TEST_CASE("truncation doubling leaves values unchanged") {
    ell::Truncation t2;
    t2.series_terms = 60;
    t2.product_terms = 120;
    t2.target_abs_err = 1e-20;
    cplx t{0.31, 0.12}, a{0.02, -0.08}, z{0.13, 0.02}, p{-0.05, 0.7};
    CHECK(std::abs(ell::th(t, tau) - ell::theta<double>(t, tau, t2)) < 1e-15);
    CHECK(std::abs(ell::Omega(a, z, tau, p) - ell::omega_phase<double>(a, z, tau, p, t2)) < 1e-15);
}

TEST_CASE("long double evaluation agrees") {
    std::complex<long double> t{0.31L, 0.12L}, ta{0.1L, 0.9L};
    auto v = ell::theta<long double>(t, ta);
    CHECK(oracle::rel(cplx(double(v.real()), double(v.imag())), ell::th({0.31, 0.12}, tau)) < 1e-15);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(ell::th(0.1, {0.1, 0.0}), Error);
    CHECK_THROWS_AS(ell::theta_level<double>(0, 0, 0.1, tau), Error);
}
