#include "rmatrix.hpp"

#include <bit>
#include <map>

#include "elliptic.hpp"

namespace qkzb::rmat {

using ell::th;
using ell::th_den;

CMat r11(cplx z, cplx lam, cplx tau, cplx eta) {
    cplx den = th_den(z - 2.0 * eta, tau, "r11") * th_den(lam, tau, "r11");
    cplx tz = th(z, tau);
    cplx t2 = th(2.0 * eta, tau);
    CMat R = CMat::Zero(4, 4);
    R(0, 0) = 1.0;
    R(3, 3) = 1.0;
    R(1, 1) = tz * th(lam + 2.0 * eta, tau) / den;
    R(2, 2) = tz * th(lam - 2.0 * eta, tau) / den;
    R(1, 2) = -t2 * th(lam + z, tau) / den;
    R(2, 1) = -t2 * th(lam - z, tau) / den;
    return R;
}

cplx elliptic_factorial(int a, cplx tau, cplx eta) {
    cplx t2 = th(2.0 * eta, tau);
    if (std::abs(t2) < 1e-13)
        throw Error(Errc::fusion_singular, "elliptic factorial: theta(2 eta) vanishes");
    cplx r = 1.0;
    for (int j = 1; j <= a; ++j) {
        cplx f = th(2.0 * eta * double(j), tau);
        if (std::abs(f) < 1e-13)
            throw Error(Errc::fusion_singular, "elliptic factorial: theta(2 eta j) vanishes");
        r *= f / t2;
    }
    return r;
}

namespace {

inline int bit(unsigned s, int K, int l) { return static_cast<int>((s >> (K - 1 - l)) & 1u); }

// X <- R^{(i,j)}(zz, lam - 2 eta sum_{spect} h) X on K qubits
void apply_dyn(CMat& X, int K, int i, int j, cplx zz, cplx lam, const std::vector<int>& spect, cplx tau, cplx eta) {
    const unsigned n = 1u << K;
    const unsigned bi = 1u << (K - 1 - i), bj = 1u << (K - 1 - j);
    std::map<int, CMat> cache;
    for (unsigned s = 0; s < n; ++s) {
        if ((s & bi) || (s & bj))
            continue;
        int w = 0;
        for (int l : spect) w += 1 - 2 * bit(s, K, l);
        auto it = cache.find(w);
        if (it == cache.end())
            it = cache.emplace(w, r11(zz, lam - 2.0 * eta * double(w), tau, eta)).first;
        const CMat& R = it->second;
        const unsigned st[4] = {s, s | bj, s | bi, s | bi | bj};
        for (Eigen::Index c = 0; c < X.cols(); ++c) {
            cplx v[4];
            for (int q = 0; q < 4; ++q) v[q] = X(st[q], c);
            for (int o = 0; o < 4; ++o) {
                cplx acc = 0;
                for (int q = 0; q < 4; ++q) acc += R(o, q) * v[q];
                X(st[o], c) = acc;
            }
        }
    }
}

std::vector<cplx> centered_string(cplx z, int L, cplx eta) {
    std::vector<cplx> xs(static_cast<size_t>(L));
    for (int i = 0; i < L; ++i) xs[static_cast<size_t>(i)] = z + 2.0 * eta * (double(i) - (L - 1) / 2.0);
    return xs;
}

}  // namespace

CMat r_fused(int L1, int L2, cplx z, cplx lam, cplx tau, cplx eta, double* leak) {
    if (L1 < 1 || L2 < 1)
        throw Error(Errc::domain, "r_fused: weights must be positive integers");
    if (L1 == 1 && L2 == 1) {
        if (leak)
            *leak = 0.0;
        return r11(z, lam, tau, eta);
    }
    const int K = L1 + L2;
    const unsigned n = 1u << K;
    const int d = (L1 + 1) * (L2 + 1);
    std::vector<cplx> ef1(static_cast<size_t>(L1 + 1)), ef2(static_cast<size_t>(L2 + 1));
    for (int a = 0; a <= L1; ++a) ef1[static_cast<size_t>(a)] = elliptic_factorial(a, tau, eta);
    for (int b = 0; b <= L2; ++b) ef2[static_cast<size_t>(b)] = elliptic_factorial(b, tau, eta);
    CMat E = CMat::Zero(n, d);
    for (unsigned s = 0; s < n; ++s) {
        int a = std::popcount(s >> L2);
        int b = std::popcount(s & ((1u << L2) - 1u));
        E(s, a * (L2 + 1) + b) = ef1[static_cast<size_t>(a)] * ef2[static_cast<size_t>(b)];
    }
    CMat X = E;
    auto xs = centered_string(z, L1, eta);
    auto ys = centered_string(0.0, L2, eta);
    for (int i = L2 - 1; i >= 0; --i) {
        for (int k = 0; k < L1; ++k) {
            std::vector<int> spect;
            for (int l = i + 1; l < L2; ++l) spect.push_back(L1 + l);
            for (int kk = k + 1; kk < L1; ++kk) spect.push_back(kk);
            apply_dyn(X, K, k, L1 + i, xs[static_cast<size_t>(k)] - ys[static_cast<size_t>(i)], lam, spect, tau, eta);
        }
    }
    CMat R(d, d);
    for (int a = 0; a <= L1; ++a)
        for (int b = 0; b <= L2; ++b) {
            unsigned sa = ((1u << a) - 1u) << (L1 - a);
            unsigned sb = ((1u << b) - 1u) << (L2 - b);
            unsigned rep = (sa << L2) | sb;
            cplx nrm = ef1[static_cast<size_t>(a)] * ef2[static_cast<size_t>(b)];
            R.row(a * (L2 + 1) + b) = X.row(rep) / nrm;
        }
    if (leak)
        *leak = max_abs(X - E * R);
    return R;
}

CMat embed_R(const std::vector<int>& dims, int i, int j, cplx z, cplx lam, const std::vector<int>& spect, cplx tau,
             cplx eta) {
    const int n = static_cast<int>(dims.size());
    std::vector<int> radix(static_cast<size_t>(n));
    int N = 1;
    for (int s = n - 1; s >= 0; --s) {
        radix[static_cast<size_t>(s)] = N;
        N *= dims[static_cast<size_t>(s)] + 1;
    }
    auto digit = [&](int st, int s) { return (st / radix[static_cast<size_t>(s)]) % (dims[static_cast<size_t>(s)] + 1); };
    const int Li = dims[static_cast<size_t>(i)], Lj = dims[static_cast<size_t>(j)];
    const int di = Li + 1, dj = Lj + 1;
    std::map<int, CMat> cache;
    auto local = [&](int w) -> const CMat& {
        auto it = cache.find(w);
        if (it != cache.end())
            return it->second;
        cplx l = lam - 2.0 * eta * double(w);
        CMat A;
        if (i < j) {
            A = r_fused(Li, Lj, z, l, tau, eta);
        } else {
            // R_{ij} with i > j is the (j,i)-ordered conjugate of R_{Li,Lj}
            CMat R = r_fused(Li, Lj, z, l, tau, eta);
            Eigen::MatrixXd P = Eigen::MatrixXd::Zero(di * dj, di * dj);
            for (int a = 0; a < di; ++a)
                for (int b = 0; b < dj; ++b) P(b * di + a, a * dj + b) = 1.0;
            A = P * R * P.transpose();
        }
        return cache.emplace(w, std::move(A)).first->second;
    };
    // local matrix index ordered by slot position
    const int lo = std::min(i, j), hi = std::max(i, j);
    const int dlo = dims[static_cast<size_t>(lo)] + 1, dhi = dims[static_cast<size_t>(hi)] + 1;
    CMat M = CMat::Zero(N, N);
    for (int st = 0; st < N; ++st) {
        int w = 0;
        for (int l : spect) w += dims[static_cast<size_t>(l)] - 2 * digit(st, l);
        const CMat& A = local(w);
        int alo = digit(st, lo), ahi = digit(st, hi);
        int col = alo * dhi + ahi;
        int base = st - alo * radix[static_cast<size_t>(lo)] - ahi * radix[static_cast<size_t>(hi)];
        for (int olo = 0; olo < dlo; ++olo)
            for (int ohi = 0; ohi < dhi; ++ohi) {
                int out = base + olo * radix[static_cast<size_t>(lo)] + ohi * radix[static_cast<size_t>(hi)];
                M(out, st) += A(olo * dhi + ohi, col);
            }
    }
    return M;
}

double unitarity_residual(int L1, int L2, cplx z, cplx lam, cplx tau, cplx eta) {
    std::vector<int> dims{L1, L2};
    CMat U = embed_R(dims, 0, 1, z, lam, {}, tau, eta) * embed_R(dims, 1, 0, -z, lam, {}, tau, eta);
    return max_abs(U - CMat::Identity(U.rows(), U.cols()));
}

double dybe_residual(const std::array<int, 3>& w, const std::array<cplx, 3>& zs, cplx lam, cplx tau, cplx eta) {
    std::vector<int> dims(w.begin(), w.end());
    cplx z12 = zs[0] - zs[1], z13 = zs[0] - zs[2], z23 = zs[1] - zs[2];
    CMat lhs = embed_R(dims, 0, 1, z12, lam, {2}, tau, eta) * embed_R(dims, 0, 2, z13, lam, {}, tau, eta) *
               embed_R(dims, 1, 2, z23, lam, {0}, tau, eta);
    CMat rhs = embed_R(dims, 1, 2, z23, lam, {}, tau, eta) * embed_R(dims, 0, 2, z13, lam, {1}, tau, eta) *
               embed_R(dims, 0, 1, z12, lam, {}, tau, eta);
    return max_abs(lhs - rhs);
}

const char* reading_name(TauShiftReading r) {
    switch (r) {
    case TauShiftReading::product: return "product";
    case TauShiftReading::sum: return "sum";
    case TauShiftReading::none: return "none";
    }
    return "?";
}

double tau_shift_residual(int L, int M, cplx z, cplx lam, cplx tau, cplx eta, TauShiftReading reading) {
    double e = 0.0;
    switch (reading) {
    case TauShiftReading::product: e = double(L) * M; break;
    case TauShiftReading::sum: e = double(L) + M; break;
    case TauShiftReading::none: e = 0.0; break;
    }
    cplx fac = std::exp(-2.0 * pi * I1 * eta * e);
    CMat Rt = r_fused(L, M, z + tau, lam, tau, eta);
    CMat R0 = r_fused(L, M, z, lam, tau, eta);
    const int d = (L + 1) * (M + 1);
    CMat lhs(d, d), rhs(d, d);
    for (int a = 0; a <= L; ++a)
        for (int b = 0; b <= M; ++b) {
            int r = a * (M + 1) + b;
            double h1 = L - 2.0 * a, h2 = M - 2.0 * b;
            lhs.row(r) = Rt.row(r) * (ell::alpha(lam - 2.0 * eta * (h1 + h2), eta) / ell::alpha(lam - 2.0 * eta * h2, eta));
            rhs.col(r) = fac * R0.col(r) * (ell::alpha(lam - 2.0 * eta * h1, eta) / ell::alpha(lam, eta));
        }
    return max_abs(lhs - rhs) / max_abs(rhs);
}

double regularity_probe(int L1, int L2, int N, cplx z, cplx lam, cplx tau, double delta) {
    cplx ep = (1.0 / N + delta) / 2.0, em = (1.0 / N - delta) / 2.0;
    CMat Rp = r_fused(L1, L2, z, lam, tau, ep);
    CMat Rm = r_fused(L1, L2, z, lam, tau, em);
    return max_abs(Rp - Rm) / max_abs(Rp);
}

double weight_commutator_residual(int L1, int L2, cplx z, cplx lam, cplx tau, cplx eta) {
    CMat R = r_fused(L1, L2, z, lam, tau, eta);
    const int d = (L1 + 1) * (L2 + 1);
    CVec h(d);
    for (int a = 0; a <= L1; ++a)
        for (int b = 0; b <= L2; ++b) h(a * (L2 + 1) + b) = double(L1 - 2 * a + L2 - 2 * b);
    CMat C = R * h.asDiagonal() - h.asDiagonal() * R;
    return max_abs(C);
}

}  // namespace qkzb::rmat
