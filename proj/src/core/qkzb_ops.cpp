#include "qkzb_ops.hpp"

#include <cmath>
#include <map>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "elliptic.hpp"
#include "rmatrix.hpp"

namespace qkzb::ops {

namespace {

int iweight(const wm::HighestWeights& w, int j) {
    double L = w[j];
    if (L < 0 || std::abs(L - std::round(L)) > 1e-12)
        throw Error(Errc::not_implemented, "qkzb operators are implemented for integer weights");
    return static_cast<int>(std::lround(L));
}

CMat local_R(int Li, int Lj, cplx z, cplx lam, cplx tau, cplx eta) {
    if (Li == 0 || Lj == 0)
        return CMat::Identity((Li + 1) * (Lj + 1), (Li + 1) * (Lj + 1));
    return rmat::r_fused(Li, Lj, z, lam, tau, eta);
}

std::vector<int> others_below(int k, int j) {
    std::vector<int> s;
    for (int l = 0; l < k; ++l)
        if (l != j)
            s.push_back(l);
    return s;
}

std::vector<int> others_above(int k, int j, int n) {
    std::vector<int> s;
    for (int l = k + 1; l < n; ++l)
        if (l != j)
            s.push_back(l);
    return s;
}

Factor rfac(int j, int k, cplx z, std::vector<int> spect) {
    Factor f;
    f.j = j;
    f.k = k;
    f.z = z;
    f.spect = std::move(spect);
    return f;
}

Factor gfac(int j) {
    Factor f;
    f.gamma = true;
    f.j = j;
    return f;
}

}  // namespace

OpPlan K_op(int j, const std::vector<cplx>& zs, cplx modulus, cplx shift, const wm::HighestWeights& w, cplx eta) {
    const int n = w.n();
    OpPlan op{{}, modulus, eta, w, wm::zero_weight_basis(w, true)};
    for (int k = j - 1; k >= 0; --k) op.factors.push_back(rfac(j, k, zs[j] - zs[k] + shift, others_below(k, j)));
    op.factors.push_back(gfac(j));
    for (int k = n - 1; k > j; --k) op.factors.push_back(rfac(j, k, zs[j] - zs[k], others_below(k, j)));
    return op;
}

OpPlan Kvee_op(int j, const std::vector<cplx>& zs, cplx modulus, cplx shift, const wm::HighestWeights& w, cplx eta) {
    const int n = w.n();
    OpPlan op{{}, modulus, eta, w, wm::zero_weight_basis(w, true)};
    for (int k = j + 1; k < n; ++k) op.factors.push_back(rfac(j, k, zs[j] - zs[k] + shift, others_above(k, j, n)));
    op.factors.push_back(gfac(j));
    for (int k = 0; k < j; ++k) op.factors.push_back(rfac(j, k, zs[j] - zs[k], others_above(k, j, n)));
    return op;
}

CMat factor_matrix(const OpPlan& op, const Factor& f, cplx lam) {
    const auto& B = op.basis;
    const int nB = static_cast<int>(B.size());
    const int Lj = iweight(op.weights, f.j), Lk = iweight(op.weights, f.k);
    CMat A = CMat::Zero(nB, nB);
    std::map<double, CMat> cache;
    for (int c = 0; c < nB; ++c) {
        const auto& Ip = B[static_cast<size_t>(c)];
        double ws = 0;
        for (int l : f.spect) ws += wm::slot_weight(Ip, op.weights, l);
        auto it = cache.find(ws);
        if (it == cache.end())
            it = cache.emplace(ws, local_R(Lj, Lk, f.z, lam - 2.0 * op.eta * ws, op.modulus, op.eta)).first;
        const CMat& R = it->second;
        int col = Ip[static_cast<size_t>(f.j)] * (Lk + 1) + Ip[static_cast<size_t>(f.k)];
        for (int r = 0; r < nB; ++r) {
            const auto& I = B[static_cast<size_t>(r)];
            bool same = true;
            for (size_t l = 0; l < I.size() && same; ++l)
                if (int(l) != f.j && int(l) != f.k && I[l] != Ip[l])
                    same = false;
            if (same)
                A(r, c) += R(I[static_cast<size_t>(f.j)] * (Lk + 1) + I[static_cast<size_t>(f.k)], col);
        }
    }
    return A;
}

Fn gamma_shift(int j, const wm::HighestWeights& w, const std::vector<wm::BasisIndex>& basis, cplx eta, Fn f) {
    std::vector<double> sh;
    for (const auto& I : basis) sh.push_back(wm::slot_weight(I, w, j));
    return [sh, eta, f](cplx lam) {
        std::map<double, CMat> vals;
        CMat out;
        for (size_t r = 0; r < sh.size(); ++r) {
            auto it = vals.find(sh[r]);
            if (it == vals.end())
                it = vals.emplace(sh[r], f(lam - 2.0 * eta * sh[r])).first;
            if (out.size() == 0)
                out = CMat::Zero(static_cast<Eigen::Index>(sh.size()), it->second.cols());
            out.row(static_cast<Eigen::Index>(r)) = it->second.row(static_cast<Eigen::Index>(r));
        }
        return out;
    };
}

Fn apply(const OpPlan& op, Fn f) {
    Fn g = std::move(f);
    for (auto it = op.factors.rbegin(); it != op.factors.rend(); ++it) {
        if (it->gamma) {
            g = gamma_shift(it->j, op.weights, op.basis, op.eta, g);
        } else {
            Factor fac = *it;
            g = [op, fac, g](cplx lam) -> CMat { return factor_matrix(op, fac, lam) * g(lam); };
        }
    }
    return g;
}

Fn apply_K(int j, const QkzbConfig& c, Fn f) { return ops::apply(K_op(j, c.zs, c.tau, c.p, c.weights, c.eta), std::move(f)); }

Fn apply_K_vee(int j, const QkzbConfig& c, Fn f) {
    return ops::apply(Kvee_op(j, c.zs, c.p, c.tau, c.weights, c.eta), std::move(f));
}

CVec d_multiplier(int j, cplx mu, DKind which, const wm::HighestWeights& w, const std::vector<wm::BasisIndex>& basis,
                  cplx eta) {
    const int n = w.n();
    double before = 0, after = 0;
    for (int l = 0; l < j; ++l) before += w[l];
    for (int l = j + 1; l < n; ++l) after += w[l];
    CVec d(static_cast<Eigen::Index>(basis.size()));
    for (size_t r = 0; r < basis.size(); ++r) {
        double hb = 0, ha = 0;
        for (int l = 0; l < j; ++l) hb += wm::slot_weight(basis[r], w, l);
        for (int l = j + 1; l < n; ++l) ha += wm::slot_weight(basis[r], w, l);
        double hj = wm::slot_weight(basis[r], w, j);
        cplx v;
        if (which == DKind::D)
            v = ell::alpha(mu - 2.0 * eta * ha, eta) / ell::alpha(mu - 2.0 * eta * (ha + hj), eta) *
                std::exp(pi * I1 * eta * w[j] * (before - after));
        else
            v = ell::alpha(mu - 2.0 * eta * hb, eta) / ell::alpha(mu - 2.0 * eta * (hb + hj), eta) *
                std::exp(-pi * I1 * eta * w[j] * (before - after));
        d(static_cast<Eigen::Index>(r)) = v;
    }
    return d;
}

int Grid::index(cplx lam) const {
    cplx k = (lam - eps) * double(N);
    double kr = std::round(k.real());
    if (std::abs(k - kr) > 1e-9)
        throw Error(Errc::grid_mismatch, "grid: point is not on eps + Z/N");
    long m = static_cast<long>(kr) % (2 * N);
    if (m < 0)
        m += 2 * N;
    return static_cast<int>(m);
}

CMat grid_factor(const OpPlan& op, const Factor& f, const Grid& g) {
    const int nB = static_cast<int>(op.basis.size());
    const int D = g.size() * nB;
    CMat M = CMat::Zero(D, D);
    if (f.gamma) {
        for (int k = 0; k < g.size(); ++k)
            for (int r = 0; r < nB; ++r) {
                double w = wm::slot_weight(op.basis[static_cast<size_t>(r)], op.weights, f.j);
                int kk = g.index(g.node(k) - 2.0 * op.eta * w);
                M(k * nB + r, kk * nB + r) = 1.0;
            }
    } else {
        for (int k = 0; k < g.size(); ++k) M.block(k * nB, k * nB, nB, nB) = factor_matrix(op, f, g.node(k));
    }
    return M;
}

CMat grid_matrix(const OpPlan& op, const Grid& g) {
    const int D = g.size() * static_cast<int>(op.basis.size());
    CMat M = CMat::Identity(D, D);
    for (const auto& f : op.factors) M = M * grid_factor(op, f, g);
    return M;
}

namespace {

std::vector<cplx> shifted(std::vector<cplx> zs, int j, cplx a) {
    zs[static_cast<size_t>(j)] += a;
    return zs;
}

}  // namespace

double compatibility_residual(bool vee, int j, int l, const std::vector<cplx>& zs, cplx tau, cplx p, const wm::HighestWeights& w,
                    cplx eta, const Grid& g) {
    auto mk = [&](int jj, const std::vector<cplx>& z) {
        return vee ? grid_matrix(Kvee_op(jj, z, p, tau, w, eta), g) : grid_matrix(K_op(jj, z, tau, p, w, eta), g);
    };
    cplx step = vee ? tau : p;
    CMat A = mk(j, shifted(zs, l, step)) * mk(l, zs);
    CMat B = mk(l, shifted(zs, j, step)) * mk(j, zs);
    return max_abs(A - B) / max_abs(A);
}

double mirror_residual(int i, const std::vector<cplx>& zs, cplx tau, cplx p, const wm::HighestWeights& w, cplx eta,
                       const Grid& g) {
    const int n = w.n();
    std::vector<cplx> zr(zs.rbegin(), zs.rend());
    wm::HighestWeights wr = w.reversed();
    OpPlan kv = Kvee_op(i, zs, p, tau, w, eta);
    OpPlan kr = K_op(n - 1 - i, zr, p, tau, wr, eta);
    CMat Kv = grid_matrix(kv, g);
    CMat Kr = grid_matrix(kr, g);
    Eigen::MatrixXd P = wm::flip_matrix(kv.basis, kr.basis);
    Eigen::MatrixXd PP = Eigen::kroneckerProduct(Eigen::MatrixXd::Identity(g.size(), g.size()), P);
    CMat rhs = PP.transpose().cast<cplx>() * Kr * PP.cast<cplx>();
    return max_abs(Kv - rhs) / max_abs(Kv);
}

double inverse_residual(int j, const QkzbConfig& c, const Grid& g) {
    CMat K = grid_matrix(K_op(j, c.zs, c.tau, c.p, c.weights, c.eta), g);
    CMat Ki = K.partialPivLu().inverse();
    return max_abs(Ki * K - CMat::Identity(K.rows(), K.cols()));
}

double linearity_residual(int j, const QkzbConfig& c, const Grid& g, unsigned seed) {
    CMat K = grid_matrix(K_op(j, c.zs, c.tau, c.p, c.weights, c.eta), g);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    auto rv = [&]() {
        CVec v(K.cols());
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(nd(rng), nd(rng));
        return v;
    };
    CVec f = rv(), h = rv();
    cplx a(nd(rng), nd(rng)), b(nd(rng), nd(rng));
    CVec lhs = K * (a * f + b * h);
    CVec rhs = a * (K * f) + b * (K * h);
    return (lhs - rhs).cwiseAbs().maxCoeff() / lhs.cwiseAbs().maxCoeff();
}

double grid_max_entry(const QkzbConfig& c, const Grid& g) {
    double m = 0;
    for (int j = 0; j < c.weights.n(); ++j) {
        for (bool vee : {false, true}) {
            CMat K = vee ? grid_matrix(Kvee_op(j, c.zs, c.p, c.tau, c.weights, c.eta), g)
                         : grid_matrix(K_op(j, c.zs, c.tau, c.p, c.weights, c.eta), g);
            if (!K.allFinite())
                return INFINITY;
            m = std::max(m, max_abs(K));
        }
    }
    return m;
}

double alpha_conjugation_residual(int j, const QkzbConfig& c, bool vee, unsigned seed) {
    const auto& w = c.weights;
    auto basis = wm::zero_weight_basis(w, true);
    const int nB = static_cast<int>(basis.size());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    CVec cs(nB), as(nB);
    for (int i = 0; i < nB; ++i) {
        cs(i) = cplx(nd(rng), nd(rng));
        as(i) = 0.3 * nd(rng);
    }
    Fn f = [cs, as](cplx l) {
        CMat v(cs.size(), 1);
        for (Eigen::Index i = 0; i < cs.size(); ++i) v(i, 0) = cs(i) * std::exp(as(i) * l);
        return v;
    };
    cplx eta = c.eta;
    Fn af = [f, eta](cplx l) { return CMat(ell::alpha(l, eta) * f(l)); };
    double tot = 0;
    for (int l = 0; l < w.n(); ++l)
        if (l != j)
            tot += w[l];
    cplx C = std::exp(-pi * I1 * eta * w[j] * tot);
    Fn lhs, rhs;
    if (!vee) {
        lhs = ops::apply(K_op(j, c.zs, c.tau, c.p + c.tau, w, eta), f);
        rhs = ops::apply(K_op(j, c.zs, c.tau, c.p, w, eta), af);
    } else {
        lhs = ops::apply(Kvee_op(j, c.zs, c.p, c.tau + c.p, w, eta), f);
        rhs = ops::apply(Kvee_op(j, c.zs, c.p, c.tau, w, eta), af);
    }
    double res = 0;
    for (cplx lam : {cplx(0.23, 0.07), cplx(-0.31, 0.02)}) {
        CVec d = d_multiplier(j, lam, vee ? DKind::D : DKind::D_vee, w, basis, eta);
        CVec l = ell::alpha(lam, eta) * (lhs(lam).col(0).array() / d.array()).matrix();
        CVec r = rhs(lam).col(0) * C;
        res = std::max(res, (l - r).cwiseAbs().maxCoeff() / r.cwiseAbs().maxCoeff());
    }
    return res;
}

}  // namespace qkzb::ops
