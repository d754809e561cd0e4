#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "common.hpp"

namespace qkzb::ell {

struct Truncation {
    int series_terms = 0;  // 0 selects J from the Gaussian tail bound
    int product_terms = 60;  // cap on the adaptive Omega / eta product length
    double target_abs_err = 1e-16;
};

inline const Truncation& default_truncation() {
    static const Truncation t{};
    return t;
}

template <class T>
std::complex<T> theta_series(std::complex<T> t, std::complex<T> tau, int deriv, const Truncation& tr) {
    using C = std::complex<T>;
    const T pi_t = std::numbers::pi_v<T>;
    const C i1(0, 1);
    if (!(tau.imag() > 0))
        throw Error(Errc::domain, "theta: Im tau must be positive");
    int J = tr.series_terms;
    if (J <= 0) {
        T lg = std::abs(std::log(static_cast<T>(tr.target_abs_err)));
        J = static_cast<int>(std::ceil(std::sqrt(lg / (pi_t * tau.imag())))) + 4;
    }
    // center the summation on the dominant term so both tails are Gaussian
    C s = t + T(0.5);
    long r0l = std::lround(-s.imag() / tau.imag() - T(0.5));
    T r0 = static_cast<T>(r0l) + T(0.5);
    C a0 = std::exp(i1 * pi_t * r0 * r0 * tau + T(2) * i1 * pi_t * r0 * s);
    C q2 = std::exp(T(2) * i1 * pi_t * tau);
    C up = std::exp(i1 * pi_t * tau * (T(2) * r0 + T(1)) + T(2) * i1 * pi_t * s);
    C dn = std::exp(i1 * pi_t * tau * (T(1) - T(2) * r0) - T(2) * i1 * pi_t * s);
    auto w = [&](T r) {
        C f(1, 0);
        C k = T(2) * i1 * pi_t * r;
        for (int d = 0; d < deriv; ++d) f *= k;
        return f;
    };
    C sum = a0 * w(r0);
    C a = a0, ra = up;
    for (int k = 1; k <= J; ++k) {
        a *= ra;
        ra *= q2;
        sum += a * w(r0 + T(k));
    }
    a = a0;
    ra = dn;
    for (int k = 1; k <= J; ++k) {
        a *= ra;
        ra *= q2;
        sum += a * w(r0 - T(k));
    }
    return -sum;
}

template <class T>
std::complex<T> theta(std::complex<T> t, std::complex<T> tau, const Truncation& tr = default_truncation()) {
    return theta_series<T>(t, tau, 0, tr);
}

template <class T>
std::complex<T> theta_prime(std::complex<T> t, std::complex<T> tau, const Truncation& tr = default_truncation()) {
    return theta_series<T>(t, tau, 1, tr);
}

template <class T>
std::complex<T> weierstrass_p(std::complex<T> t, std::complex<T> tau, const Truncation& tr = default_truncation()) {
    using C = std::complex<T>;
    C th = theta_series<T>(t, tau, 0, tr);
    if (std::abs(th) < T(1e-13))
        throw Error(Errc::pole, "weierstrass_p: argument on the period lattice");
    const C x0(T(0.5), T(0));
    C t0 = theta_series<T>(x0, tau, 0, tr);
    C t1 = theta_series<T>(x0, tau, 1, tr);
    C t2 = theta_series<T>(x0, tau, 2, tr);
    C d1 = theta_series<T>(C(0), tau, 1, tr);
    C d3 = theta_series<T>(C(0), tau, 3, tr);
    // value at the reference point from the Laurent-normalized log-derivative
    C px0 = (t1 * t1 - t0 * t2) / (t0 * t0) + d3 / (T(3) * d1);
    return px0 - d1 * d1 * theta_series<T>(t + x0, tau, 0, tr) * theta_series<T>(t - x0, tau, 0, tr) /
                     (th * th * t0 * t0);
}

template <class T>
int eta_product_terms(std::complex<T> tau, const Truncation& tr) {
    T r = std::exp(-T(2) * std::numbers::pi_v<T> * tau.imag());
    int K = static_cast<int>(std::ceil(std::log(static_cast<T>(tr.target_abs_err) * (1 - r)) / std::log(r))) + 1;
    return std::clamp(K, 1, std::max(1, tr.product_terms));
}

template <class T>
std::complex<T> dedekind_eta(std::complex<T> tau, const Truncation& tr = default_truncation()) {
    using C = std::complex<T>;
    if (!(tau.imag() > 0))
        throw Error(Errc::domain, "dedekind_eta: Im tau must be positive");
    const C i1(0, 1);
    const T pi_t = std::numbers::pi_v<T>;
    C q = std::exp(T(2) * i1 * pi_t * tau);
    int K = eta_product_terms(tau, tr);
    C prod(1), qj(1);
    for (int j = 1; j <= K; ++j) {
        qj *= q;
        prod *= C(1) - qj;
    }
    return std::exp(i1 * pi_t * tau / T(12)) * prod;
}

// d/dtau log eta(tau)
template <class T>
std::complex<T> dedekind_eta_logderiv(std::complex<T> tau, const Truncation& tr = default_truncation()) {
    using C = std::complex<T>;
    if (!(tau.imag() > 0))
        throw Error(Errc::domain, "dedekind_eta: Im tau must be positive");
    const C i1(0, 1);
    const T pi_t = std::numbers::pi_v<T>;
    C q = std::exp(T(2) * i1 * pi_t * tau);
    int K = eta_product_terms(tau, tr) + 4;
    C s(0), qj(1);
    for (int j = 1; j <= K; ++j) {
        qj *= q;
        s += T(j) * qj / (C(1) - qj);
    }
    return i1 * pi_t / T(12) - T(2) * i1 * pi_t * s;
}

template <class T>
int omega_product_terms(std::complex<T> a, std::complex<T> z, std::complex<T> tau, std::complex<T> p,
                        const Truncation& tr) {
    const T pi_t = std::numbers::pi_v<T>;
    T r = std::max(std::exp(-T(2) * pi_t * tau.imag()), std::exp(-T(2) * pi_t * p.imag()));
    // largest leading factor magnitude among the four families
    T lead = std::max({T(1), std::exp(-T(2) * pi_t * (z - a).imag()), std::exp(-T(2) * pi_t * (z + a).imag()),
                       std::exp(T(2) * pi_t * (z + a).imag()) * r * r, std::exp(T(2) * pi_t * (z - a).imag()) * r * r});
    T need = (std::log(static_cast<T>(tr.target_abs_err)) - std::log(lead)) / std::log(r);
    int K = static_cast<int>(std::ceil(need)) + 2;
    return std::clamp(K, 2, std::max(2, tr.product_terms));
}

template <class T>
std::complex<T> omega_phase(std::complex<T> a, std::complex<T> z, std::complex<T> tau, std::complex<T> p,
                            const Truncation& tr = default_truncation()) {
    using C = std::complex<T>;
    if (!(tau.imag() > 0) || !(p.imag() > 0))
        throw Error(Errc::domain, "omega_phase: Im tau and Im p must be positive");
    const C i1(0, 1);
    const T pi_t = std::numbers::pi_v<T>;
    auto e = [&](C x) { return std::exp(T(2) * i1 * pi_t * x); };
    int K = omega_product_terms(a, z, tau, p, tr);
    C q = e(tau), P = e(p);
    C n1 = e(z - a), n2 = e(-z - a + tau + p);
    C d1 = e(z + a), d2 = e(-z + a + tau + p);
    C num(1), den(1);
    C qj(1);
    for (int j = 0; j < K; ++j) {
        C qp = qj;
        for (int k = 0; k < K; ++k) {
            C fn = (C(1) - n1 * qp) * (C(1) - n2 * qp);
            C fd = (C(1) - d1 * qp) * (C(1) - d2 * qp);
            if (std::abs(fd) < T(1e-13))
                throw Error(Errc::singular, "omega_phase: vanishing denominator factor");
            num *= fn;
            den *= fd;
            qp *= P;
        }
        qj *= q;
        // renormalize to keep the partial products in range
        C ratio = num / den;
        num = ratio;
        den = C(1);
    }
    return num / den;
}

template <class T>
std::complex<T> alpha_gauss(std::complex<T> lambda, std::complex<T> eta) {
    if (eta == std::complex<T>(0))
        throw Error(Errc::domain, "alpha_gauss: eta must be nonzero");
    const std::complex<T> i1(0, 1);
    return std::exp(-i1 * std::numbers::pi_v<T> * lambda * lambda / (T(4) * eta));
}

template <class T>
std::complex<T> theta_level_series(long j, int kappa, std::complex<T> lambda, std::complex<T> tau, int deriv_lambda,
                                   const Truncation& tr = default_truncation()) {
    using C = std::complex<T>;
    if (!(tau.imag() > 0))
        throw Error(Errc::domain, "theta_level: Im tau must be positive");
    if (kappa <= 0)
        throw Error(Errc::domain, "theta_level: kappa must be positive");
    const C i1(0, 1);
    const T pi_t = std::numbers::pi_v<T>;
    long m = 2L * kappa;
    long jr = ((j % m) + m) % m;
    T off = static_cast<T>(jr) / static_cast<T>(m);
    T lg = std::abs(std::log(static_cast<T>(tr.target_abs_err)));
    int R = static_cast<int>(std::ceil(std::sqrt(lg / (T(2) * pi_t * kappa * tau.imag())))) + 4;
    long c = std::lround(-lambda.imag() / (T(2) * tau.imag()) - off);
    C s(0);
    for (long n = c - R; n <= c + R; ++n) {
        T r = static_cast<T>(n) + off;
        C term = std::exp(T(2) * i1 * pi_t * T(kappa) * (r * r * tau + r * lambda));
        C f(1);
        for (int d = 0; d < deriv_lambda; ++d) f *= T(2) * i1 * pi_t * T(kappa) * r;
        s += term * f;
    }
    return s;
}

template <class T>
std::complex<T> theta_level(long j, int kappa, std::complex<T> lambda, std::complex<T> tau,
                            const Truncation& tr = default_truncation()) {
    return theta_level_series<T>(j, kappa, lambda, tau, 0, tr);
}

// double-precision shorthands used throughout the library
inline cplx th(cplx t, cplx tau) { return theta<double>(t, tau); }
inline cplx thp(cplx t, cplx tau) { return theta_prime<double>(t, tau); }
inline cplx alpha(cplx lambda, cplx eta) { return alpha_gauss<double>(lambda, eta); }
inline cplx Omega(cplx a, cplx z, cplx tau, cplx p) { return omega_phase<double>(a, z, tau, p); }

// theta with pole guard: throws when |value| < 1e-13
cplx th_den(cplx t, cplx tau, const char* where);

}  // namespace qkzb::ell
