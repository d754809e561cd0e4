#include "shapovalov.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "elliptic.hpp"
#include "rmatrix.hpp"

namespace qkzb::shap {

using ell::th;
using ell::thp;
using wm::BasisIndex;
using wm::HighestWeights;

cplx q_single(int k, double L, cplx mu, cplx tau, cplx eta) {
    cplx r = std::pow(thp(0.0, tau) / ell::th_den(2.0 * eta, tau, "Q"), k);
    for (int l = 1; l <= k; ++l) {
        r *= th(2.0 * eta * (L + 1 - l), tau) * th(2.0 * eta * double(l), tau);
        r /= ell::th_den(mu + 2.0 * eta * (L + 1 - k - l), tau, "Q") * ell::th_den(mu - 2.0 * eta * double(l), tau, "Q");
    }
    return r;
}

cplx q_index(const BasisIndex& J, cplx mu, cplx tau, const HighestWeights& w, cplx eta) {
    cplx r = 1.0;
    double sh = 0;
    for (int j = 0; j < w.n(); ++j) {
        r *= q_single(J[static_cast<size_t>(j)], w[j], mu + 2.0 * eta * sh, tau, eta);
        sh += w[j] - 2.0 * J[static_cast<size_t>(j)];
    }
    return r;
}

CVec q_tensor(cplx mu, cplx tau, const HighestWeights& w, cplx eta, const std::vector<BasisIndex>& basis) {
    CVec d(static_cast<Eigen::Index>(basis.size()));
    for (size_t r = 0; r < basis.size(); ++r) d(static_cast<Eigen::Index>(r)) = q_index(basis[r], mu, tau, w, eta);
    return d;
}

double default_tmax(cplx eta, double budget) { return std::sqrt(budget / (pi * std::abs(eta.imag()))); }

std::vector<cplx> path_nodes(cplx eta, const IntegrationPath& path, double tmax) {
    std::vector<cplx> out;
    int m = static_cast<int>(std::floor(tmax / path.hs + 1e-9));
    for (int s = -m; s <= m; ++s) out.push_back(2.0 * eta * (s * path.hs) + path.offset);
    return out;
}

namespace {

constexpr double tail_tol = 1e-14;
constexpr int max_widen = 6;

double start_tmax(cplx eta, const IntegrationPath& path) {
    if (path.tmax > 0) return path.tmax;
    if (eta.imag() == 0.0) throw Error(Errc::divergence, "integration path: eta must have nonzero imaginary part");
    return default_tmax(eta);
}

bool tail_small(const std::vector<double>& mags) {
    if (mags.size() < 3) return false;
    double mx = *std::max_element(mags.begin(), mags.end());
    if (!std::isfinite(mx)) return false;
    return std::max(mags.front(), mags.back()) <= tail_tol * mx;
}

// assemble(tmax) returns per-node magnitudes; widen until the ends are negligible
template <class F>
double adaptive(cplx eta, const IntegrationPath& path, F&& assemble) {
    double T = start_tmax(eta, path);
    for (int it = 0;; ++it) {
        auto mags = assemble(T);
        if (!path.adaptive || tail_small(mags)) return T;
        if (it == max_widen) throw Error(Errc::divergence, "integration path: tail does not decay");
        T *= 1.25;
    }
}

CMat col(const CVec& v) { return CMat(v); }

double rel(const CMat& a, const CMat& b) {
    double s = std::max(max_abs(a), max_abs(b));
    return s == 0.0 ? 0.0 : max_abs(a - b) / s;
}

ops::Fn random_exp(int nB, std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> nd;
    CVec cs(nB), as(nB);
    for (int i = 0; i < nB; ++i) {
        cs(i) = cplx(nd(rng), nd(rng));
        as(i) = scale * nd(rng);
    }
    return [cs, as](cplx l) {
        CMat v(cs.size(), 1);
        for (Eigen::Index i = 0; i < cs.size(); ++i) v(i, 0) = cs(i) * std::exp(as(i) * l);
        return v;
    };
}

std::vector<cplx> shifted(std::vector<cplx> zs, int j, cplx a) {
    zs[static_cast<size_t>(j)] += a;
    return zs;
}

}  // namespace

cplx integrate_path(cplx eta, const IntegrationPath& path, const std::function<cplx(cplx)>& f) {
    cplx result;
    adaptive(eta, path, [&](double T) {
        auto mus = path_nodes(eta, path, T);
        std::vector<double> mags;
        Accum acc;
        for (cplx mu : mus) {
            cplx v = f(mu);
            mags.push_back(std::abs(v));
            acc.add(v);
        }
        result = acc.sum * 2.0 * eta * path.hs;
        return mags;
    });
    return result;
}

cplx shapovalov_pair(const ops::Fn& f, const ops::Fn& g, cplx tau, const HighestWeights& w, cplx eta,
                     const IntegrationPath& path) {
    auto basis = wm::zero_weight_basis(w, w.integral());
    return integrate_path(eta, path, [&](cplx mu) {
        CMat fv = f(mu), gv = g(-mu);
        cplx s = 0;
        for (size_t a = 0; a < basis.size(); ++a) {
            auto r = static_cast<Eigen::Index>(a);
            s += q_index(basis[a], mu, tau, w, eta) * fv(r, 0) * gv(r, 0);
        }
        return s * ell::alpha(mu, eta);
    });
}

HeatT::HeatT(std::vector<cplx> zs, cplx tau, cplx p, HighestWeights w, cplx eta, ops::Fn v, const IntegrationPath& path,
             cplx norm)
    : w_(std::move(w)), eta_(eta), sigma_(tau + p), norm_(norm), v_(std::move(v)), path_(path) {
    uk_ = std::make_shared<hyp::UKernel>(std::move(zs), tau, sigma_, w_, eta_);
    tmax_ = adaptive(eta_, path_, [&](double T) {
        assemble(T);
        std::vector<double> mags;
        for (size_t k = 0; k < mus_.size(); ++k) {
            cplx ph = std::exp(-pi * I1 * path_.offset * mus_[k] / (2.0 * eta_));
            mags.push_back(std::abs(ph) * rw_.col(static_cast<Eigen::Index>(k)).norm());
        }
        return mags;
    });
}

void HeatT::assemble(double T) {
    mus_ = path_nodes(eta_, path_, T);
    const auto& basis = uk_->basis();
    const auto nB = static_cast<Eigen::Index>(basis.size());
    cplx dmu = 2.0 * eta_ * path_.hs;
    rw_.resize(static_cast<Eigen::Index>(uk_->contour().nodes.size()), static_cast<Eigen::Index>(mus_.size()));
    for (size_t k = 0; k < mus_.size(); ++k) {
        cplx mu = mus_[k];
        CMat vv = v_(-mu);
        CVec W(nB);
        for (Eigen::Index b = 0; b < nB; ++b)
            W(b) = q_index(basis[static_cast<size_t>(b)], mu, sigma_, w_, eta_) * vv(b, 0) * ell::alpha(mu, eta_) * dmu;
        rw_.col(static_cast<Eigen::Index>(k)) = uk_->right(mu) * W;
    }
}

CVec HeatT::operator()(cplx lam) const {
    CVec ph(static_cast<Eigen::Index>(mus_.size()));
    for (size_t k = 0; k < mus_.size(); ++k)
        ph(static_cast<Eigen::Index>(k)) = std::exp(-pi * I1 * lam * mus_[k] / (2.0 * eta_));
    CVec M = rw_ * ph;
    return norm_ * ell::alpha(lam, eta_) * (uk_->left(lam) * M);
}

ops::Fn HeatT::fn() const {
    auto self = std::make_shared<HeatT>(*this);
    return [self](cplx l) { return col((*self)(l)); };
}

HeatTVee::HeatTVee(std::vector<cplx> zs, cplx p, cplx tau, HighestWeights w, cplx eta, ops::Fn v,
                   const IntegrationPath& path)
    : w_(std::move(w)), eta_(eta), sigma_(tau + p), v_(std::move(v)), path_(path) {
    uk_ = std::make_shared<hyp::UKernel>(std::move(zs), sigma_, p, w_, eta_);
    const auto& basis = uk_->basis();
    const auto nB = static_cast<Eigen::Index>(basis.size());
    const auto nt = static_cast<Eigen::Index>(uk_->contour().nodes.size());
    adaptive(eta_, path_, [&](double T) {
        mus_ = path_nodes(eta_, path_, T);
        cplx dmu = 2.0 * eta_ * path_.hs;
        s_.resize(static_cast<Eigen::Index>(mus_.size()), nt);
        std::vector<double> mags;
        for (size_t k = 0; k < mus_.size(); ++k) {
            cplx mu = mus_[k];
            CMat vv = v_(mu);
            CVec W(nB);
            for (Eigen::Index b = 0; b < nB; ++b)
                W(b) = q_index(basis[static_cast<size_t>(b)], mu, sigma_, w_, eta_) * vv(b, 0) * ell::alpha(mu, eta_) * dmu;
            s_.row(static_cast<Eigen::Index>(k)) = W.transpose() * uk_->left(-mu);
            cplx ph = std::exp(pi * I1 * mu * path_.offset / (2.0 * eta_));
            mags.push_back(std::abs(ph) * s_.row(static_cast<Eigen::Index>(k)).norm());
        }
        return mags;
    });
}

CVec HeatTVee::operator()(cplx nu) const {
    Eigen::RowVectorXcd ph(static_cast<Eigen::Index>(mus_.size()));
    for (size_t k = 0; k < mus_.size(); ++k)
        ph(static_cast<Eigen::Index>(k)) = std::exp(pi * I1 * mus_[k] * nu / (2.0 * eta_));
    Eigen::RowVectorXcd r = (ph * s_) * uk_->right(nu);
    return ell::alpha(nu, eta_) * r.transpose();
}

ops::Fn HeatTVee::fn() const {
    auto self = std::make_shared<HeatTVee>(*this);
    return [self](cplx l) { return col((*self)(l)); };
}

cplx heat_constant_n1(cplx eta) { return -1.0 / (4.0 * pi * std::sqrt(I1 * eta)); }

cplx heat_T_explicit_n1(cplx lam, cplx tau, cplx p, cplx eta, const std::function<cplx(cplx)>& v,
                        const IntegrationPath& path) {
    cplx sig = tau + p;
    auto fam = hyp::families({0.0}, {2.0}, eta, tau, sig);
    auto c = hyp::build_contour(fam.upper, fam.lower);
    std::vector<cplx> base(c.nodes.size());
    for (size_t q = 0; q < c.nodes.size(); ++q) {
        cplx t = c.nodes[q];
        base[q] = c.weights[q] * ell::Omega(2.0 * eta, t, tau, sig) * th(lam + t, tau) /
                  (ell::th_den(t - 2.0 * eta, tau, "heat") * ell::th_den(t - 2.0 * eta, sig, "heat"));
    }
    cplx k = th(4.0 * eta, sig) * thp(0.0, sig);
    cplx integral = integrate_path(eta, path, [&](cplx mu) {
        Accum a;
        for (size_t q = 0; q < c.nodes.size(); ++q) a.add(base[q] * th(mu + c.nodes[q], sig));
        cplx u = std::exp(-pi * I1 * lam * mu / (2.0 * eta)) * a.sum;
        return u * k / (th(mu + 2.0 * eta, sig) * th(mu - 2.0 * eta, sig)) * ell::alpha(mu, eta) * v(-mu);
    });
    return heat_constant_n1(eta) * ell::alpha(lam, eta) * integral;
}

double heat_intertwining_residual(int j, const std::vector<cplx>& zs, cplx tau, cplx p, const HighestWeights& w, cplx eta,
                         unsigned seed, const IntegrationPath& path) {
    auto basis = wm::zero_weight_basis(w, w.integral());
    std::mt19937_64 rng(seed);
    ops::Fn v = random_exp(static_cast<int>(basis.size()), rng, 0.3);
    ops::Fn Kv = ops::apply(ops::K_op(j, zs, tau + p, p, w, eta), v);
    HeatT lhs(shifted(zs, j, p), tau, p, w, eta, Kv, path);
    HeatT T0(zs, tau, p, w, eta, v, path);
    ops::Fn rhs = ops::apply(ops::K_op(j, zs, tau, p, w, eta), T0.fn());
    double res = 0;
    for (cplx lam : {cplx(0.23, 0.07), cplx(-0.11, 0.03)}) res = std::max(res, rel(col(lhs(lam)), rhs(lam)));
    return res;
}

double heat_vee_intertwining_residual(int j, const std::vector<cplx>& zs, cplx tau, cplx p, const HighestWeights& w, cplx eta,
                             unsigned seed, const IntegrationPath& path) {
    auto basis = wm::zero_weight_basis(w, w.integral());
    std::mt19937_64 rng(seed);
    ops::Fn v = random_exp(static_cast<int>(basis.size()), rng, 0.3);
    ops::Fn Kv = ops::apply(ops::Kvee_op(j, zs, p + tau, tau, w, eta), v);
    HeatTVee lhs(shifted(zs, j, tau), p, tau, w, eta, Kv, path);
    HeatTVee T0(zs, p, tau, w, eta, v, path);
    ops::Fn rhs = ops::apply(ops::Kvee_op(j, zs, p, tau, w, eta), T0.fn());
    double res = 0;
    for (cplx nu : {cplx(0.23, 0.07), cplx(-0.11, 0.03)}) res = std::max(res, rel(col(lhs(nu)), rhs(nu)));
    return res;
}

double r_symmetry_residual(int L, int M, cplx z, cplx mu, cplx tau, cplx eta) {
    const int n = (L + 1) * (M + 1);
    CMat DL = CMat::Zero(n, n), DR = CMat::Zero(n, n), Rp(n, n);
    for (int a = 0; a <= L; ++a)
        for (int b = 0; b <= M; ++b) {
            int r = a * (M + 1) + b;
            DL(r, r) = q_single(a, L, mu + 2.0 * eta * double(M - 2 * b), tau, eta) * q_single(b, M, mu, tau, eta);
            DR(r, r) = q_single(a, L, mu, tau, eta) * q_single(b, M, mu + 2.0 * eta * double(L - 2 * a), tau, eta);
            double h = (L - 2 * a) + (M - 2 * b);
            Rp.col(r) = rmat::r_fused(L, M, z, mu + 2.0 * eta * h, tau, eta).col(r);
        }
    CMat lhs = rmat::r_fused(L, M, z, -mu, tau, eta).transpose() * DL;
    CMat rhs = DR * Rp;
    return max_abs(lhs - rhs) / max_abs(lhs);
}

double adjointness_residual(int j, bool second, const std::vector<cplx>& zs, cplx tau, cplx p, const HighestWeights& w,
                        cplx eta, unsigned seed) {
    auto basis = wm::zero_weight_basis(w, w.integral());
    const int nB = static_cast<int>(basis.size());
    std::mt19937_64 rng(seed);
    ops::Fn f = random_exp(nB, rng, 0.5);
    ops::Fn g = random_exp(nB, rng, 0.5);
    cplx sig = tau + p;
    double others = 0;
    for (int l = 0; l < w.n(); ++l)
        if (l != j) others += w[l];
    cplx C = std::exp(pi * I1 * eta * w[j] * others);
    auto divide = [&](ops::DKind kind, ops::Fn h) {
        return ops::Fn([=](cplx m) {
            CVec d = ops::d_multiplier(j, m, kind, w, basis, eta);
            CMat x = h(m);
            for (Eigen::Index r = 0; r < x.rows(); ++r) x.row(r) /= d(r);
            return x;
        });
    };
    cplx lhs, rhs;
    if (!second) {
        ops::Fn Kg = ops::apply(ops::K_op(j, zs, sig, p, w, eta), g);
        ops::Fn Kvf = ops::apply(ops::Kvee_op(j, shifted(zs, j, p), sig, tau, w, eta), f);
        lhs = shapovalov_pair(f, Kg, sig, w, eta);
        rhs = shapovalov_pair(divide(ops::DKind::D, Kvf), g, sig, w, eta) * C;
    } else {
        ops::Fn Kvf = ops::apply(ops::Kvee_op(j, zs, sig, tau, w, eta), f);
        ops::Fn Kg = ops::apply(ops::K_op(j, shifted(zs, j, tau), sig, p, w, eta), g);
        lhs = shapovalov_pair(Kvf, g, sig, w, eta);
        rhs = shapovalov_pair(f, divide(ops::DKind::D_vee, Kg), sig, w, eta) * C;
    }
    return std::abs(lhs - rhs) / std::abs(lhs);
}

CMat compose_U(const std::vector<cplx>& zs, cplx lam, cplx nu, cplx tau, cplx p, const HighestWeights& w, cplx eta,
               const IntegrationPath& path) {
    cplx sig = tau + p;
    hyp::UKernel u1(zs, tau, sig, w, eta), u2(zs, sig, p, w, eta);
    const auto& basis = u1.basis();
    CMat L1 = u1.left(lam), R2 = u2.right(nu);
    const auto nB = static_cast<Eigen::Index>(basis.size());
    CMat out;
    adaptive(eta, path, [&](double T) {
        auto mus = path_nodes(eta, path, T);
        out = CMat::Zero(nB, nB);
        std::vector<double> mags;
        for (cplx mu : mus) {
            CMat A = u1.eval(L1, lam, u1.right(mu), mu);
            CMat B = u2.eval(u2.left(-mu), -mu, R2, nu);
            CVec q = q_tensor(mu, sig, w, eta, basis);
            CMat term = A * q.asDiagonal() * B * ell::alpha(mu, eta);
            mags.push_back(max_abs(term));
            out += term;
        }
        return mags;
    });
    return out * (ell::alpha(lam, eta) * ell::alpha(nu, eta) * 2.0 * eta * path.hs);
}

CompositionReport composition_constant(const std::vector<cplx>& zs, cplx tau, cplx p, const HighestWeights& w, cplx eta,
                                  const std::vector<std::pair<cplx, cplx>>& draws) {
    CompositionReport r;
    r.expected = -std::exp(4.0 * pi * I1 * eta) / (2.0 * pi * std::sqrt(4.0 * I1 * eta));
    std::vector<cplx> ratios;
    for (auto [lam, nu] : draws) {
        CMat U = compose_U(zs, lam, nu, tau, p, w, eta);
        CMat u = hyp::universal_u(zs, lam, nu, tau, p, w, eta);
        for (Eigen::Index i = 0; i < U.size(); ++i)
            if (std::abs(u(i)) > 1e-12 * max_abs(u)) ratios.push_back(U(i) / u(i));
    }
    cplx s = 0;
    for (cplx x : ratios) s += x;
    r.measured = s / double(ratios.size());
    for (cplx x : ratios) r.spread = std::max(r.spread, std::abs(x - r.measured) / std::abs(r.measured));
    r.rel_to_expected = std::abs(r.measured - r.expected) / std::abs(r.expected);
    r.rel_to_inverse = std::abs(r.measured - 1.0 / r.expected) / std::abs(1.0 / r.expected);
    return r;
}

cplx gauss_sum(int N) {
    if (N < 1) throw Error(Errc::domain, "gauss_sum: N must be positive");
    Accum a;
    for (int k = 0; k < 2 * N; ++k) {
        // reduce k^2 mod 4N before exponentiating
        long e = (static_cast<long>(k) * k) % (4L * N);
        a.add(std::exp(-pi * I1 * double(e) / (2.0 * N)));
    }
    return a.sum;
}

namespace {

// block row of T_N at lambda
CMat tn_row(const hyp::UKernel& uk, cplx lam, const ops::Grid& g, const HighestWeights& w) {
    const int N = g.N;
    cplx eta = uk.eta();
    cplx sig = uk.p();
    const auto& basis = uk.basis();
    const auto nB = static_cast<Eigen::Index>(basis.size());
    CMat row = CMat::Zero(nB, g.size() * nB);
    CMat L = uk.left(lam);
    cplx el = std::exp(-double(N) * I1 * pi * lam * lam / 2.0);
    for (int k = 0; k < g.size(); ++k) {
        cplx mu = -g.eps + double(k) / N;
        CMat U = uk.eval(L, lam, uk.right(mu), mu);
        int c = g.index(-mu);
        cplx em = std::exp(-double(N) * I1 * pi * mu * mu / 2.0);
        for (Eigen::Index J = 0; J < nB; ++J)
            row.col(c * nB + J) += el * U.col(J) * q_index(basis[static_cast<size_t>(J)], mu, sig, w, eta) * em;
    }
    return row;
}

}  // namespace

CMat heat_TN(const std::vector<cplx>& zs, cplx tau, cplx p, const ops::Grid& g, const HighestWeights& w) {
    cplx eta = 1.0 / (2.0 * g.N);
    hyp::UKernel uk(zs, tau, tau + p, w, eta);
    const auto nB = static_cast<Eigen::Index>(uk.basis().size());
    CMat T(g.size() * nB, g.size() * nB);
    for (int a = 0; a < g.size(); ++a) T.middleRows(a * nB, nB) = tn_row(uk, g.node(a), g, w);
    return T;
}

double finite_heat_intertwining_residual(int j, const std::vector<cplx>& zs, cplx tau, cplx p, const ops::Grid& g,
                         const HighestWeights& w) {
    cplx eta = 1.0 / (2.0 * g.N);
    cplx sig = tau + p;
    CMat L = heat_TN(shifted(zs, j, p), tau, p, g, w) * ops::grid_matrix(ops::K_op(j, zs, sig, p, w, eta), g);
    CMat R = ops::grid_matrix(ops::K_op(j, zs, tau, p, w, eta), g) * heat_TN(zs, tau, p, g, w);
    return max_abs(L - R) / max_abs(R);
}

double tn_periodicity_residual(const std::vector<cplx>& zs, cplx tau, cplx p, const ops::Grid& g,
                               const HighestWeights& w) {
    cplx eta = 1.0 / (2.0 * g.N);
    hyp::UKernel uk(zs, tau, tau + p, w, eta);
    double res = 0;
    for (int a = 0; a < g.size(); ++a)
        res = std::max(res, rel(tn_row(uk, g.node(a) + 2.0, g, w), tn_row(uk, g.node(a), g, w)));
    return res;
}

RationalReport rational_constant(int N, cplx tau, cplx p, cplx eps) {
    RationalReport rep;
    cplx eta = 1.0 / (2.0 * N);
    cplx sig = tau + p;
    HighestWeights w({2.0});
    rep.CN = I1 * std::exp(2.0 * pi * I1 / double(N)) / gauss_sum(N);
    hyp::UKernel u1({0.0}, tau, sig, w, eta), u2({0.0}, sig, p, w, eta), u0({0.0}, tau, p, w, eta);
    std::vector<cplx> ratios, us, uns;
    for (auto [lam, nu] : {std::pair<cplx, cplx>{eps + 2.0 / N, 3.0 / N}, {eps - 1.0 / N, 1.0 / N}}) {
        CMat L1 = u1.left(lam), R2 = u2.right(nu);
        Accum a;
        for (int k = 0; k < 2 * N; ++k) {
            cplx mu = -eps + double(k) / N;
            cplx A = u1.eval(L1, lam, u1.right(mu), mu)(0, 0);
            cplx B = u2.eval(u2.left(-mu), -mu, R2, nu)(0, 0);
            a.add(q_single(1, 2.0, mu, sig, eta) * A * B * std::exp(-double(N) * I1 * pi * mu * mu / 2.0));
        }
        cplx UN = std::exp(-double(N) * I1 * pi * (lam * lam + nu * nu) / 2.0) * a.sum;
        cplx u = u0.eval(lam, nu)(0, 0);
        us.push_back(u);
        uns.push_back(UN);
        ratios.push_back(u / UN);
    }
    rep.measured = (ratios[0] + ratios[1]) / 2.0;
    for (size_t i = 0; i < us.size(); ++i) {
        rep.residual_literal = std::max(rep.residual_literal, std::abs(us[i] - rep.CN * uns[i]) / std::abs(us[i]));
        rep.residual_measured = std::max(rep.residual_measured, std::abs(us[i] - rep.measured * uns[i]) / std::abs(us[i]));
    }
    return rep;
}

double regular_eta_variation(int N, cplx lam, cplx nu, cplx tau, cplx p, double delta) {
    HighestWeights w({2.0});
    cplx a = hyp::universal_u({0.0}, lam, nu, tau, p, w, (1.0 / N + delta) / 2.0)(0, 0);
    cplx b = hyp::universal_u({0.0}, lam, nu, tau, p, w, (1.0 / N - delta) / 2.0)(0, 0);
    return rel_err(a, b);
}

}  // namespace qkzb::shap
