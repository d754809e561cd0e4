#include "blocks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "elliptic.hpp"
#include "shapovalov.hpp"

namespace qkzb::blk {

using ell::th;
using ell::thp;

namespace {

const cplx saddle_c0{0.031, 0.017};

const std::vector<cplx>& test_lambdas() {
    static const std::vector<cplx> l{{0.13, 0.04}, {-0.27, 0.02}};
    return l;
}

cplx thl(long j, int k, cplx lam, cplx tau) { return ell::theta_level<double>(j, k, lam, tau); }

cplx prod_theta(cplx lam, cplx tau, cplx eta, int from, int to) {
    cplx r = 1.0;
    for (int j = from; j <= to; ++j) r *= th(lam - 2.0 * eta * double(j), tau);
    return r;
}

cplx reflection_factor(int m, cplx lam, cplx tau, cplx eta) {
    cplx r = (m + 1) % 2 == 0 ? 1.0 : -1.0;
    for (int j = 1; j <= m; ++j) r *= th(lam + 2.0 * eta * double(j), tau) / th(lam - 2.0 * eta * double(j), tau);
    return r;
}

shap::IntegrationPath saddle(cplx lam, cplx eta, double hs, double factor) {
    shap::IntegrationPath p;
    p.offset = -lam + saddle_c0;
    p.hs = hs;
    p.tmax = factor * shap::default_tmax(eta);
    return p;
}

}  // namespace

int dim_E(int kappa, int m) {
    if (kappa < 0 || m < 0) throw Error(Errc::domain, "dim_E: kappa and m must be nonnegative");
    return kappa >= 2 * m + 2 ? kappa - 2 * m - 1 : 0;
}

DimReport dim_E_numeric(int kappa, int m, cplx eta, cplx tau, unsigned seed) {
    DimReport rep;
    int kp = kappa - 2 * m - 2;
    if (kp < 0) return rep;
    std::vector<Fn1> cand;
    if (kp == 0) {
        cand.push_back([=](cplx l) { return prod_theta(l, tau, eta, 0, m); });
    } else {
        for (int j = 0; j < 2 * kp; ++j)
            cand.push_back([=](cplx l) { return prod_theta(l, tau, eta, 0, m) * thl(j, kp, l, tau); });
    }
    rep.candidates = static_cast<int>(cand.size());
    const int ns = 2 * rep.candidates + 6;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ur(-0.5, 0.5), ui(-0.3, 0.3);
    CMat A(ns, rep.candidates);
    for (int s = 0; s < ns; ++s) {
        cplx l(ur(rng), ui(rng));
        cplx rf = reflection_factor(m, l, tau, eta);
        double sc = 0;
        for (int c = 0; c < rep.candidates; ++c) {
            cplx a = cand[size_t(c)](-l), b = rf * cand[size_t(c)](l);
            A(s, c) = a - b;
            sc = std::max({sc, std::abs(a), std::abs(b)});
        }
        if (sc > 0) A.row(s) /= sc;
    }
    Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeFullV);
    auto sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) rep.singular_values.push_back(sv(i));
    CMat V = svd.matrixV();
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > 1e-9) continue;
        ++rep.nullity;
        CVec coef = V.col(i);
        rep.basis.push_back([cand, coef](cplx l) {
            cplx s = 0;
            for (Eigen::Index c = 0; c < coef.size(); ++c) s += coef(c) * cand[size_t(c)](l);
            return s;
        });
    }
    return rep;
}

MembershipReport membership(int kappa, int m, cplx eta, cplx tau, const Fn1& f) {
    MembershipReport rep;
    for (cplx lam : test_lambdas()) {
        cplx f0 = f(lam);
        for (int r = -1; r <= 1; ++r)
            for (int s = -1; s <= 1; ++s) {
                cplx fac = std::exp(4.0 * pi * I1 * eta * double(m * (m + 1) * s) -
                                    2.0 * pi * I1 * double(kappa) * (double(s * s) * tau + double(s) * lam));
                cplx sh = f(lam + 2.0 * double(r) + 2.0 * double(s) * tau);
                rep.quasi_periodicity = std::max(rep.quasi_periodicity, std::abs(sh - fac * f0) / std::abs(fac * f0));
            }
        rep.reflection =
            std::max(rep.reflection, std::abs(f(-lam) - reflection_factor(m, lam, tau, eta) * f0) / std::abs(f0));
    }
    for (int j = 0; j <= m; ++j)
        for (int r = -1; r <= 1; ++r)
            for (int s = -1; s <= 1; ++s) {
                cplx c = 2.0 * eta * double(j) + double(r) + double(s) * tau;
                double scale = 0;
                for (int q = 0; q < 8; ++q) scale = std::max(scale, std::abs(f(c + 0.05 * e2pi(q / 8.0))));
                rep.vanishing = std::max(rep.vanishing, std::abs(f(c)) / scale);
            }
    return rep;
}

double membership_residual(int kappa, int m, cplx eta, cplx tau, const Fn1& f) {
    return membership(kappa, m, eta, tau, f).max();
}

double theta_space_residual(int k, cplx tau, const Fn1& f) {
    double res = 0;
    for (cplx lam : test_lambdas()) {
        cplx f0 = f(lam);
        for (int r = -1; r <= 1; ++r)
            for (int s = -1; s <= 1; ++s) {
                cplx fac = std::exp(-2.0 * pi * I1 * double(k) * (double(s * s) * tau + double(s) * lam));
                cplx sh = f(lam + 2.0 * double(r) + 2.0 * double(s) * tau);
                res = std::max(res, std::abs(sh - fac * f0) / std::abs(fac * f0));
            }
        res = std::max(res, std::abs(f(-lam) - f0) / std::abs(f0));
    }
    return res;
}

namespace {

cplx nabla_at(int kappa, int m, const Fn2& v, cplx lam, cplx tau, EtaTerm sign, double h, double* scale) {
    cplx v0 = v(lam, tau);
    cplx dt = (-v(lam, tau + 2.0 * h) + 8.0 * v(lam, tau + h) - 8.0 * v(lam, tau - h) + v(lam, tau - 2.0 * h)) / (12.0 * h);
    cplx dll = (-v(lam + 2.0 * h, tau) + 16.0 * v(lam + h, tau) - 30.0 * v0 + 16.0 * v(lam - h, tau) -
                v(lam - 2.0 * h, tau)) /
               (12.0 * h * h);
    cplx heat = dll;
    if (m > 0) heat -= double(m * (m + 1)) * ell::weierstrass_p<double>(lam, tau) * v0;
    heat /= 2.0 * pi * I1 * double(kappa);
    cplx le = ell::dedekind_eta_logderiv<double>(tau);
    cplx etaterm = sign == EtaTerm::plus ? le * v0 : -le * v0;
    *scale = std::max({std::abs(v0), std::abs(dt), std::abs(heat)});
    return dt - heat + etaterm;
}

}  // namespace

NablaResult kzb_connection(int kappa, int m, const Fn2& v, cplx lam, cplx tau, EtaTerm sign, double h, double tol) {
    if (kappa <= 0) throw Error(Errc::domain, "kzb_connection: kappa must be positive");
    NablaResult r;
    double s1, s2;
    r.value = nabla_at(kappa, m, v, lam, tau, sign, h, &s1);
    cplx coarse = nabla_at(kappa, m, v, lam, tau, sign, 2.0 * h, &s2);
    double scale = std::max(s1, s2);
    r.disagreement = scale > 0 ? std::abs(r.value - coarse) / scale : 0.0;
    r.unstable = r.disagreement > tol;
    return r;
}

Fn2 horizontal_section(int j, int kappa) {
    return [=](cplx lam, cplx tau) {
        return (thl(j + 1, kappa, lam, tau) - thl(-j - 1, kappa, lam, tau)) / ell::dedekind_eta<double>(tau);
    };
}

Fn1 heat_T_kappa0(int kappa, cplx eta, cplx tau, Fn1 v, bool normalized) {
    (void)kappa;
    (void)tau;
    cplx norm = normalized ? I1 / std::sqrt(4.0 * I1 * eta) : cplx(1.0);
    return [=](cplx lam) {
        shap::IntegrationPath path;
        path.offset = 0.0;
        path.hs = 0.2;
        return norm * shap::integrate_path(eta, path, [&](cplx mu) {
                   return std::exp(-pi * I1 * (lam + mu) * (lam + mu) / (4.0 * eta)) * v(-mu);
               });
    };
}

double theta_identity_residual(int j, int kappa, cplx eta, cplx tau, cplx lam) {
    cplx sig = tau - 2.0 * eta * double(kappa);
    Fn1 v = [=](cplx l) { return thl(j, kappa, l, sig); };
    cplx img = heat_T_kappa0(kappa, eta, tau, v)(lam);
    cplx ex = thl(j, kappa, lam, tau);
    return std::abs(img - ex) / std::abs(ex);
}

cplx input_modulus(int kappa, cplx eta, cplx tau, PConvention pc) {
    cplx p = -2.0 * eta * double(kappa);
    if (pc == PConvention::literal) p += tau;
    return tau + p;
}

HeatTKappaM::HeatTKappaM(int kappa, int m, cplx eta, cplx tau, Fn1 v, PConvention pc, double hs)
    : kappa_(kappa), m_(m), eta_(eta), tau_(tau), v_(std::move(v)), hs_(hs) {
    if (m < 0 || m > 1) throw Error(Errc::not_implemented, "heat_T_kappa_m: implemented for m in {0, 1}");
    if (kappa < 2 * m + 2) throw Error(Errc::domain, "heat_T_kappa_m: requires kappa >= 2m + 2");
    if (!(eta.imag() < 0)) throw Error(Errc::domain, "heat_T_kappa_m: requires Im eta < 0");
    sigma_ = input_modulus(kappa, eta, tau, pc);
    if (m == 1) uk_ = std::make_shared<hyp::UKernel>(std::vector<cplx>{0.0}, tau_, sigma_, wm::HighestWeights({2.0}), eta_);
}

cplx HeatTKappaM::operator()(cplx lam) const {
    auto path = saddle(lam, eta_, hs_, 1.5);
    if (m_ == 0)
        return shap::integrate_path(eta_, path, [&](cplx mu) {
            return std::exp(-pi * I1 * (lam + mu) * (lam + mu) / (4.0 * eta_)) * v_(-mu);
        });
    CMat L = uk_->left(lam);
    cplx integral = shap::integrate_path(eta_, path, [&](cplx mu) {
        cplx u = uk_->eval(L, lam, uk_->right(mu), mu)(0, 0);
        cplx phi = th(-mu + 2.0 * eta_, sigma_) * v_(-mu);
        return u * shap::q_single(1, 2.0, mu, sigma_, eta_) * phi * ell::alpha(mu, eta_);
    });
    return ell::alpha(lam, eta_) * integral / th(lam + 2.0 * eta_, tau_);
}

Fn1 HeatTKappaM::fn() const {
    auto self = std::make_shared<HeatTKappaM>(*this);
    return [self](cplx l) { return (*self)(l); };
}

VKernel::VKernel(cplx tau, cplx sigma, cplx eta, const hyp::ContourOptions& o, cplx c)
    : tau_(tau), sigma_(sigma), eta_(eta), c_(c) {
    auto fam = hyp::families({0.0}, {2.0}, eta, tau, sigma);
    auto ct = hyp::build_contour(fam.upper, fam.lower, o);
    nodes_ = ct.nodes;
    base_.resize(nodes_.size());
    for (size_t q = 0; q < nodes_.size(); ++q) {
        cplx t = nodes_[q];
        base_[q] = ct.weights[q] * ell::Omega(2.0 * eta, t, tau, sigma) /
                   (ell::th_den(t - 2.0 * eta, tau, "V") * ell::th_den(t - 2.0 * eta, sigma, "V"));
    }
}

cplx VKernel::operator()(cplx lam, cplx mu) const {
    Accum a;
    for (size_t q = 0; q < nodes_.size(); ++q)
        a.add(base_[q] * th(lam + nodes_[q], tau_) * th(mu + nodes_[q], sigma_));
    return c_ * std::exp(-pi * I1 * lam * mu / (2.0 * eta_)) * a.sum /
           (th(lam + 2.0 * eta_, tau_) * th(mu + 2.0 * eta_, sigma_));
}

cplx residue(const Fn1& f, cplx center, double r, int n) {
    Accum a;
    for (int k = 0; k < n; ++k) {
        cplx q = e2pi(double(k) / n);
        a.add(f(center + r * q) * r * q);
    }
    return a.sum / double(n);
}

double v_residue_residual(int r, int s, cplx mu, cplx tau, cplx sigma, cplx eta) {
    VKernel V(tau, sigma, eta);
    cplx shift = double(r) + double(s) * tau;
    cplx lhs = V(2.0 * eta + shift, mu);
    cplx res = residue([&](cplx l) { return V(l, mu); }, -2.0 * eta + shift);
    cplx rhs = thp(0.0, tau) / th(4.0 * eta, tau) * e2pi(double(s) * sigma) * res;
    return std::abs(lhs - rhs) / std::abs(lhs);
}

double v_heat_assembly_residual(int kappa, cplx eta, cplx tau, const Fn1& v, const std::vector<cplx>& lambdas) {
    HeatTKappaM T(kappa, 1, eta, tau, v);
    cplx sig = T.sigma();
    VKernel V(tau, sig, eta, {}, -thp(0.0, sig) * th(4.0 * eta, sig));
    double res = 0;
    for (cplx lam : lambdas) {
        auto path = saddle(lam, eta, 0.1, 1.5);
        cplx a = ell::alpha(lam, eta) * shap::integrate_path(eta, path, [&](cplx mu) {
                     return V(lam, mu) * ell::alpha(mu, eta) * v(-mu);
                 });
        res = std::max(res, rel_err(a, T(lam)));
    }
    return res;
}

namespace {

struct Fam {
    std::vector<cplx> upper, lower;
};

Fam lattice_family(const std::vector<cplx>& cs, cplx z, cplx tau, cplx p, int amax = 4) {
    Fam f;
    for (cplx c : cs)
        for (int a = 0; a < amax; ++a)
            for (int b = 0; b < amax; ++b) {
                cplx l = double(a) * tau + double(b) * p;
                f.upper.push_back(z + c + l);
                f.lower.push_back(z - c - l);
            }
    return f;
}

}  // namespace

MKernel::MKernel(int m, cplx tau, cplx p, cplx eta, int nline, int ncirc) : m_(m), tau_(tau), p_(p), eta_(eta) {
    if (m < 0) throw Error(Errc::domain, "kernel_M: m must be nonnegative");
    if (m > 2) throw Error(Errc::not_implemented, "kernel_M: iterated contour implemented for m <= 2");
    if (m == 0) return;
    cplx a = 2.0 * eta * double(m);
    hyp::ContourOptions o;
    o.nline = nline > 0 ? nline : (m == 1 ? 96 : 64);
    o.ncirc = ncirc > 0 ? ncirc : (m == 1 ? 48 : 32);
    Fam single = lattice_family({a}, 0.0, tau, p);
    if (m == 1) {
        auto c = hyp::build_contour(single.upper, single.lower, o);
        for (size_t q = 0; q < c.nodes.size(); ++q) {
            cplx t = c.nodes[q];
            t1_.push_back(t);
            base_.push_back(c.weights[q] * ell::Omega(a, t, tau, p) /
                            (ell::th_den(t - a, tau, "M") * ell::th_den(t - a, p, "M")));
        }
        return;
    }
    o.height = hyp::build_contour(single.upper, single.lower, o).height;
    Fam outer = lattice_family({a, a - 2.0 * eta}, 0.0, tau, p);
    auto c2 = hyp::build_contour(outer.upper, outer.lower, o);
    for (size_t q2 = 0; q2 < c2.nodes.size(); ++q2) {
        cplx x = c2.nodes[q2];
        Fam in = single;
        Fam sh = lattice_family({-2.0 * eta}, x, tau, p);
        in.upper.insert(in.upper.end(), sh.upper.begin(), sh.upper.end());
        in.lower.insert(in.lower.end(), sh.lower.begin(), sh.lower.end());
        auto c1 = hyp::build_contour(in.upper, in.lower, o);
        for (size_t q1 = 0; q1 < c1.nodes.size(); ++q1) {
            cplx t1 = c1.nodes[q1], t12 = t1 - x;
            cplx b = c1.weights[q1] * c2.weights[q2];
            b *= ell::Omega(a, t1, tau, p) * ell::Omega(a, x, tau, p) * ell::Omega(-2.0 * eta, t12, tau, p);
            b *= th(t12, tau) / th(t12 + 2.0 * eta, tau) * th(t12, p) / th(t12 + 2.0 * eta, p);
            b /= th(t1 - a, tau) * th(x - a, tau) * th(t1 - a, p) * th(x - a, p);
            t1_.push_back(t1);
            t2_.push_back(x);
            base_.push_back(b);
        }
    }
}

std::vector<cplx> MKernel::left(cplx lam) const {
    std::vector<cplx> A(base_.size());
    for (size_t q = 0; q < base_.size(); ++q) {
        A[q] = base_[q] * th(lam + t1_[q], tau_);
        if (m_ == 2) A[q] *= th(lam + t2_[q], tau_);
    }
    return A;
}

cplx MKernel::eval(const std::vector<cplx>& A, cplx lam, cplx mu) const {
    cplx u0 = 1.0;
    if (m_ > 0) {
        Accum acc;
        for (size_t q = 0; q < A.size(); ++q) {
            cplx f = A[q] * th(mu + t1_[q], p_);
            if (m_ == 2) f *= th(mu + t2_[q], p_);
            acc.add(f);
        }
        u0 = acc.sum;
    }
    return std::exp(-pi * I1 * (lam + mu) * (lam + mu) / (4.0 * eta_)) * u0 * th(mu, p_) /
           prod_theta(lam, tau_, eta_, -m_, m_);
}

cplx MKernel::operator()(cplx lam, cplx mu) const { return eval(left(lam), lam, mu); }

cplx MKernel::apply(const Fn1& phi, cplx lam, double hs) const {
    auto A = left(lam);
    auto path = saddle(lam, eta_, hs, 1.3);
    return shap::integrate_path(eta_, path, [&](cplx mu) { return eval(A, lam, mu) * phi(-mu); });
}

double kernel_m0_residual(int kappa, cplx eta, cplx tau, const std::vector<cplx>& lambdas) {
    cplx sig = tau - 2.0 * eta * double(kappa);
    Fn1 phi = [=](cplx l) { return thl(0, kappa - 2, l, sig); };
    MKernel M(0, tau, sig, eta);
    HeatTKappaM T(kappa, 0, eta, tau, [=](cplx l) { return th(l, sig) * phi(l); });
    double res = 0;
    for (cplx lam : lambdas) res = std::max(res, rel_err(M.apply(phi, lam) * th(lam, tau), -T(lam)));
    return res;
}

double kernel_m1_ratio_spread(int kappa, cplx eta, cplx tau, const std::vector<std::pair<cplx, cplx>>& pts) {
    cplx sig = tau - 2.0 * eta * double(kappa);
    MKernel M(1, tau, sig, eta);
    VKernel V(tau, sig, eta);
    std::vector<cplx> r;
    for (auto [lam, mu] : pts) {
        cplx assembly = ell::alpha(lam, eta) * ell::alpha(mu, eta) * V(lam, mu) * th(mu, sig) *
                        th(mu + 2.0 * eta, sig) / (th(lam - 2.0 * eta, tau) * th(lam, tau));
        r.push_back(M(lam, mu) / assembly);
    }
    cplx mean = 0;
    for (cplx x : r) mean += x;
    mean /= double(r.size());
    double spread = 0;
    for (cplx x : r) spread = std::max(spread, std::abs(x - mean) / std::abs(mean));
    return spread;
}

ModularElement::ModularElement(long a_, long b_, long c_, long d_) : a(a_), b(b_), c(c_), d(d_) {
    if (a * d - b * c != 1) throw Error(Errc::domain, "ModularElement: determinant must be 1");
}

ModularElement ModularElement::operator*(const ModularElement& o) const {
    return ModularElement(a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d);
}

cplx ModularElement::act(cplx tau) const { return (double(a) * tau + double(b)) / (double(c) * tau + double(d)); }

Fn1 cocycle_psi(const ModularElement& g, int kappa, cplx tau, Fn1 v, PsiReading r) {
    cplx j = double(g.c) * tau + double(g.d);
    if (std::abs(j) == 0.0) throw Error(Errc::domain, "cocycle_psi: c tau + d vanishes");
    double c = double(g.c), d = double(g.d);
    return [=](cplx lam) {
        cplx f = r == PsiReading::ctau ? j : c * lam + d;
        return std::exp(pi * I1 * double(kappa) / 2.0 * c * f * lam * lam) * v(j * lam);
    };
}

namespace {

cplx psi_test(cplx l) { return std::exp(0.3 * l) * (1.0 + 0.2 * l * l) + cplx(0.1, -0.05) * l; }

const std::vector<cplx>& psi_points() {
    static const std::vector<cplx> p{{0.13, 0.04}, {-0.27, 0.02}, {0.31, -0.05}};
    return p;
}

}  // namespace

double cocycle_residual(const ModularElement& g, const ModularElement& h, int kappa, cplx tau, PsiReading r) {
    Fn1 lhs = cocycle_psi(g * h, kappa, tau, psi_test, r);
    Fn1 rhs = cocycle_psi(g, kappa, h.act(tau), cocycle_psi(h, kappa, tau, psi_test, r), r);
    double res = 0;
    for (cplx l : psi_points()) res = std::max(res, rel_err(lhs(l), rhs(l)));
    return res;
}

double section_rule_residual(const ModularElement& g, int kappa, cplx tau, PsiReading r) {
    cplx j = double(g.c) * tau + double(g.d);
    Fn1 psi = cocycle_psi(g, -kappa, tau, psi_test, r);
    double res = 0;
    for (cplx l : psi_points()) {
        cplx rule = std::exp(-pi * I1 * double(kappa) * double(g.c) * j * l * l / 2.0) * psi_test(j * l);
        res = std::max(res, rel_err(psi(l), rule));
    }
    return res;
}

}  // namespace qkzb::blk
