#pragma once

#include <cmath>
#include <complex>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;
inline const cplx I1{0.0, 1.0};

// brute-force theta series over j = -100..99
inline cplx theta(cplx t, cplx tau) {
    cplx s = 0;
    for (int j = -100; j < 100; ++j) {
        double r = j + 0.5;
        s += std::exp(I1 * pi * r * r * tau + 2.0 * I1 * pi * r * (t + 0.5));
    }
    return -s;
}

// wp(z; 1, tau) = sum_m pi^2 csc^2(pi (z + m tau)) - pi^2/3 - sum_{m != 0} pi^2 csc^2(pi m tau)
inline cplx wp(cplx z, cplx tau, int M = 40) {
    auto csc2 = [](cplx x) {
        cplx s = std::sin(pi * x);
        return pi * pi / (s * s);
    };
    cplx r = csc2(z) - pi * pi / 3.0;
    for (int m = 1; m <= M; ++m) {
        r += csc2(z + double(m) * tau) + csc2(z - double(m) * tau);
        r -= 2.0 * csc2(double(m) * tau);
    }
    return r;
}

inline cplx eta_product(cplx tau, int factors = 100) {
    cplx q = std::exp(2.0 * pi * I1 * tau), p = 1.0, qj = 1.0;
    for (int j = 1; j <= factors; ++j) {
        qj *= q;
        p *= 1.0 - qj;
    }
    return std::exp(I1 * pi * tau / 12.0) * p;
}

inline cplx theta_level(int j, int kappa, cplx lam, cplx tau) {
    cplx s = 0;
    for (int n = -60; n <= 60; ++n) {
        double r = n + double(j) / (2.0 * kappa);
        s += std::exp(2.0 * pi * I1 * double(kappa) * (r * r * tau + r * lam));
    }
    return s;
}

inline double rel(cplx a, cplx b) {
    double s = std::max(std::abs(a), std::abs(b));
    return s == 0 ? 0 : std::abs(a - b) / s;
}

}  // namespace oracle
