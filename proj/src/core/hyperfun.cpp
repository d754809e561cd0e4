#include "hyperfun.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

#include "elliptic.hpp"

namespace qkzb::hyp {

using ell::th;

void Contour::realize() {
    nodes.clear();
    weights.clear();
    for (int k = 0; k < nline; ++k) {
        nodes.emplace_back(x0 + double(k) / nline, height);
        weights.emplace_back(1.0 / nline, 0.0);
    }
    for (const auto& c : circles) {
        for (int k = 0; k < ncirc; ++k) {
            cplx e = std::exp(2.0 * pi * I1 * (double(k) / ncirc));
            nodes.push_back(c.center + c.radius * e);
            weights.push_back(double(c.orientation) * I1 * c.radius * e * (2.0 * pi / ncirc));
        }
    }
}

Contour build_contour(const std::vector<cplx>& upper, const std::vector<cplx>& lower, const ContourOptions& o) {
    Contour c;
    c.nline = o.nline;
    c.ncirc = o.ncirc;
    std::vector<cplx> all(upper);
    all.insert(all.end(), lower.begin(), lower.end());
    double h;
    if (o.height) {
        h = *o.height;
    } else {
        double uL = INFINITY, lH = -INFINITY;
        for (auto q : upper) uL = std::min(uL, q.imag());
        for (auto q : lower) lH = std::max(lH, q.imag());
        double lo = std::min(uL, lH) - 1.0, hi = std::max(uL, lH) + 1.0;
        std::vector<double> ims{lo, hi};
        for (auto q : all)
            if (q.imag() >= lo && q.imag() <= hi)
                ims.push_back(q.imag());
        std::sort(ims.begin(), ims.end());
        size_t best = 0;
        for (size_t k = 0; k + 1 < ims.size(); ++k)
            if (ims[k + 1] - ims[k] > ims[best + 1] - ims[best])
                best = k;
        double gap = ims[best + 1] - ims[best];
        h = 0.5 * (ims[best] + ims[best + 1]) + o.shift_frac * 0.5 * gap;
    }
    c.height = h;
    auto reduce = [](cplx q) { return q - std::floor(q.real() + 0.5); };
    auto add = [&](cplx q, int orient) {
        cplx ctr = reduce(q);
        for (const auto& e : c.circles)
            if (std::abs(e.center - ctr) < 1e-12 && e.orientation == orient)
                return;
        double d = INFINITY;
        for (auto r : all)
            for (int s = -1; s <= 1; ++s) {
                double dd = std::abs(ctr - reduce(r) - double(s));
                if (dd > 1e-12)
                    d = std::min(d, dd);
            }
        c.circles.push_back({ctr, o.radius_factor * d, orient});
    };
    for (auto q : upper)
        if (q.imag() < h)
            add(q, 1);
    for (auto q : lower)
        if (q.imag() > h)
            add(q, -1);
    c.tag = "line+circles";
    c.realize();
    return c;
}

PoleFamilies families(const std::vector<cplx>& zs, const std::vector<double>& Ls, cplx eta, cplx tau, cplx p,
                      int amax) {
    PoleFamilies f;
    for (size_t k = 0; k < zs.size(); ++k)
        for (int a = 0; a < amax; ++a)
            for (int b = 0; b < amax; ++b) {
                f.upper.push_back(zs[k] + eta * Ls[k] + double(a) * tau + double(b) * p);
                f.lower.push_back(zs[k] - eta * Ls[k] - double(a) * tau - double(b) * p);
            }
    return f;
}

nlohmann::json contour_to_json(const Contour& c) {
    nlohmann::json j;
    j["tag"] = c.tag;
    j["segment"] = {{"start", {c.x0, c.height}}, {"end", {c.x0 + 1.0, c.height}}, {"nodes", c.nline}};
    j["detours"] = nlohmann::json::array();
    for (const auto& e : c.circles)
        j["detours"].push_back({{"center", {e.center.real(), e.center.imag()}},
                                {"radius", e.radius},
                                {"orientation", e.orientation > 0 ? "ccw" : "cw"}});
    j["nodes_per_detour"] = c.ncirc;
    return j;
}

Contour contour_from_json(const nlohmann::json& j) {
    Contour c;
    c.tag = j.value("tag", std::string("line+circles"));
    const auto& s = j.at("segment");
    c.x0 = s.at("start").at(0).get<double>();
    c.height = s.at("start").at(1).get<double>();
    c.nline = s.at("nodes").get<int>();
    c.ncirc = j.at("nodes_per_detour").get<int>();
    for (const auto& d : j.at("detours")) {
        Circle e;
        e.center = cplx(d.at("center").at(0).get<double>(), d.at("center").at(1).get<double>());
        e.radius = d.at("radius").get<double>();
        e.orientation = d.at("orientation").get<std::string>() == "ccw" ? 1 : -1;
        c.circles.push_back(e);
    }
    c.realize();
    return c;
}

cplx weight_fn(const wm::BasisIndex& I, const std::vector<cplx>& t, const std::vector<cplx>& zs, cplx lam, cplx tau,
               const std::vector<double>& Ls, cplx eta) {
    const int m = static_cast<int>(t.size());
    const int n = static_cast<int>(Ls.size());
    int tot = 0;
    for (int v : I) tot += v;
    if (tot != m)
        throw Error(Errc::domain, "weight_fn: index does not match the number of variables");
    auto den = [&](cplx x) { return ell::th_den(x, tau, "weight_fn"); };
    cplx pref = 1.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) pref *= th(t[i] - t[j], tau) / den(t[i] - t[j] + 2.0 * eta);
    std::vector<cplx> shift(static_cast<size_t>(n));
    double acc = 0;
    for (int k = 0; k < n; ++k) {
        shift[static_cast<size_t>(k)] = -zs[k] - eta * Ls[k] + 2.0 * eta * double(I[k]) - 2.0 * eta * acc;
        acc += Ls[k] - 2.0 * I[k];
    }
    std::vector<int> label(static_cast<size_t>(m), -1), left(I.begin(), I.end());
    cplx sum = 0;
    std::function<void(int)> rec = [&](int i) {
        if (i == m) {
            cplx term = 1.0;
            for (int a = 0; a < m; ++a) {
                int l = label[static_cast<size_t>(a)];
                for (int k = 0; k < l; ++k) term *= th(t[a] - zs[k] + eta * Ls[k], tau) / den(t[a] - zs[k] - eta * Ls[k]);
                term *= th(lam + t[a] + shift[static_cast<size_t>(l)], tau) / den(t[a] - zs[l] - eta * Ls[l]);
            }
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    if (label[static_cast<size_t>(a)] < label[static_cast<size_t>(b)])
                        term *= th(t[a] - t[b] + 2.0 * eta, tau) / den(t[a] - t[b]);
            sum += term;
            return;
        }
        for (int k = 0; k < n; ++k) {
            if (left[static_cast<size_t>(k)] == 0)
                continue;
            --left[static_cast<size_t>(k)];
            label[static_cast<size_t>(i)] = k;
            rec(i + 1);
            ++left[static_cast<size_t>(k)];
        }
    };
    rec(0);
    return pref * sum;
}

cplx mirror_weight_fn(const wm::BasisIndex& J, const std::vector<cplx>& t, const std::vector<cplx>& zs, cplx mu, cplx p,
                      const std::vector<double>& Ls, cplx eta) {
    std::vector<cplx> zr(zs.rbegin(), zs.rend());
    std::vector<double> Lr(Ls.rbegin(), Ls.rend());
    return weight_fn(wm::reversed(J), t, zr, mu, p, Lr, eta);
}

namespace {

// lambda-independent factor and lambda shift of the m = 1 weight function
void m1_parts(const wm::BasisIndex& I, cplx t, const std::vector<cplx>& zs, cplx tau, const std::vector<double>& Ls,
              cplx eta, cplx& pre, cplx& shift) {
    int k = static_cast<int>(std::find(I.begin(), I.end(), 1) - I.begin());
    pre = 1.0;
    double acc = 0;
    for (int l = 0; l < k; ++l) {
        pre *= th(t - zs[l] + eta * Ls[l], tau) / ell::th_den(t - zs[l] - eta * Ls[l], tau, "weight_fn");
        acc += Ls[l];
    }
    pre /= ell::th_den(t - zs[k] - eta * Ls[k], tau, "weight_fn");
    shift = -zs[k] - eta * Ls[k] + 2.0 * eta - 2.0 * eta * acc;
}

}  // namespace

UKernel::UKernel(std::vector<cplx> zs, cplx tau, cplx p, wm::HighestWeights w, cplx eta, const ContourOptions& o)
    : zs_(std::move(zs)), tau_(tau), p_(p), eta_(eta), w_(std::move(w)) {
    if (w_.m() != 1)
        throw Error(Errc::not_implemented, "UKernel: contour quadrature is implemented for m = 1");
    basis_ = wm::zero_weight_basis(w_, w_.integral());
    const auto& Ls = w_.lambdas();
    auto fam = families(zs_, Ls, eta_, tau_, p_);
    contour_ = build_contour(fam.upper, fam.lower, o);
    const auto nt = static_cast<Eigen::Index>(contour_.nodes.size());
    const auto nB = static_cast<Eigen::Index>(basis_.size());
    pre_.resize(nB, nt);
    pre_vee_.resize(nt, nB);
    shift_.resize(static_cast<size_t>(nB));
    shift_vee_.resize(static_cast<size_t>(nB));
    std::vector<cplx> zr(zs_.rbegin(), zs_.rend());
    std::vector<double> Lr(Ls.rbegin(), Ls.rend());
    for (Eigen::Index q = 0; q < nt; ++q) {
        cplx t = contour_.nodes[static_cast<size_t>(q)];
        cplx om = contour_.weights[static_cast<size_t>(q)];
        for (size_t k = 0; k < zs_.size(); ++k) om *= ell::Omega(eta_ * Ls[k], t - zs_[k], tau_, p_);
        for (Eigen::Index b = 0; b < nB; ++b) {
            cplx pre, sh;
            m1_parts(basis_[static_cast<size_t>(b)], t, zs_, tau_, Ls, eta_, pre, sh);
            pre_(b, q) = om * pre;
            shift_[static_cast<size_t>(b)] = sh;
            m1_parts(wm::reversed(basis_[static_cast<size_t>(b)]), t, zr, p_, Lr, eta_, pre, sh);
            pre_vee_(q, b) = pre;
            shift_vee_[static_cast<size_t>(b)] = sh;
        }
    }
}

CMat UKernel::left(cplx lam) const {
    CMat L = pre_;
    for (Eigen::Index b = 0; b < L.rows(); ++b)
        for (Eigen::Index q = 0; q < L.cols(); ++q)
            L(b, q) *= th(lam + contour_.nodes[static_cast<size_t>(q)] + shift_[static_cast<size_t>(b)], tau_);
    return L;
}

CMat UKernel::right(cplx mu) const {
    CMat R = pre_vee_;
    for (Eigen::Index q = 0; q < R.rows(); ++q)
        for (Eigen::Index b = 0; b < R.cols(); ++b)
            R(q, b) *= th(mu + contour_.nodes[static_cast<size_t>(q)] + shift_vee_[static_cast<size_t>(b)], p_);
    return R;
}

CMat UKernel::eval(const CMat& L, cplx lam, const CMat& R, cplx mu) const {
    return std::exp(-pi * I1 * lam * mu / (2.0 * eta_)) * (L * R);
}

CMat UKernel::eval(cplx lam, cplx mu) const { return eval(left(lam), lam, right(mu), mu); }

CMat universal_u(const std::vector<cplx>& zs, cplx lam, cplx mu, cplx tau, cplx p, const wm::HighestWeights& w, cplx eta,
                 const ContourOptions& o) {
    if (w.m() == 0) {
        CMat u(1, 1);
        u(0, 0) = std::exp(-pi * I1 * lam * mu / (2.0 * eta));
        return u;
    }
    if (w.m() == 1)
        return UKernel(zs, tau, p, w, eta, o).eval(lam, mu);
    if (!in_convergent_region(w.lambdas(), eta, tau, p))
        throw Error(Errc::domain,
                    "universal_u: m >= 2 needs Im eta < 0 and Im(eta Lambda_i) > 0 (torus region); not satisfied");
    return universal_u_torus(zs, lam, mu, tau, p, w.lambdas(), w.m(), eta);
}

bool in_convergent_region(const std::vector<double>& Ls, cplx eta, cplx tau, cplx p) {
    if (!(eta.imag() < 0 && tau.imag() > 0 && p.imag() > 0))
        return false;
    return std::all_of(Ls.begin(), Ls.end(), [&](double L) { return (eta * L).imag() > 0; });
}

CMat universal_u_torus(const std::vector<cplx>& zs, cplx lam, cplx mu, cplx tau, cplx p, const std::vector<double>& Ls,
                       int m, cplx eta, int npts) {
    if (!in_convergent_region(Ls, eta, tau, p))
        throw Error(Errc::domain, "universal_u_torus: parameters outside the convergent region");
    const int n = static_cast<int>(Ls.size());
    std::vector<wm::BasisIndex> basis;
    wm::BasisIndex cur(static_cast<size_t>(n), 0);
    std::function<void(int, int)> comp = [&](int s, int left) {
        if (s == n - 1) {
            cur[static_cast<size_t>(s)] = left;
            basis.push_back(cur);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            cur[static_cast<size_t>(s)] = k;
            comp(s + 1, left - k);
        }
    };
    comp(0, m);
    const auto nB = static_cast<Eigen::Index>(basis.size());
    CMat U = CMat::Zero(nB, nB);
    std::vector<int> idx(static_cast<size_t>(m), 0);
    long total = 1;
    for (int i = 0; i < m; ++i) total *= npts;
    std::vector<cplx> t(static_cast<size_t>(m));
    const double wq = std::pow(1.0 / npts, m);
    for (long node = 0; node < total; ++node) {
        long r = node;
        for (int i = 0; i < m; ++i) {
            t[static_cast<size_t>(i)] = double(r % npts) / npts;
            r /= npts;
        }
        cplx om = wq;
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < n; ++k) om *= ell::Omega(eta * Ls[k], t[i] - zs[k], tau, p);
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) om *= ell::Omega(-2.0 * eta, t[i] - t[j], tau, p);
        CVec a(nB), b(nB);
        for (Eigen::Index q = 0; q < nB; ++q) {
            a(q) = weight_fn(basis[static_cast<size_t>(q)], t, zs, lam, tau, Ls, eta);
            b(q) = mirror_weight_fn(basis[static_cast<size_t>(q)], t, zs, mu, p, Ls, eta);
        }
        U += om * a * b.transpose();
    }
    return std::exp(-pi * I1 * lam * mu / (2.0 * eta)) * U;
}

namespace {

std::vector<cplx> shifted(std::vector<cplx> zs, int j, cplx a) {
    zs[static_cast<size_t>(j)] += a;
    return zs;
}

double rel(const CMat& a, const CMat& b) { return max_abs(a - b) / std::max(max_abs(a), max_abs(b)); }

}  // namespace

double qkzb_system_residual(Shift which, int j, const std::vector<cplx>& zs, cplx lam, cplx mu, cplx tau, cplx p,
                            const wm::HighestWeights& w, cplx eta, const ContourOptions& o) {
    auto uk = std::make_shared<UKernel>(zs, tau, p, w, eta, o);
    const auto& B = uk->basis();
    switch (which) {
    case Shift::p_shift: {
        CMat lhs = UKernel(shifted(zs, j, p), tau, p, w, eta, o).eval(lam, mu);
        CMat R = uk->right(mu);
        ops::Fn f = [uk, R, mu](cplx l) { return uk->eval(uk->left(l), l, R, mu); };
        CMat g = ops::apply(ops::K_op(j, zs, tau, p, w, eta), f)(lam);
        CMat rhs = g * ops::d_multiplier(j, mu, ops::DKind::D, w, B, eta).asDiagonal();
        return rel(lhs, rhs);
    }
    case Shift::tau_shift: {
        CMat lhs = UKernel(shifted(zs, j, tau), tau, p, w, eta, o).eval(lam, mu);
        CMat L = uk->left(lam);
        ops::Fn f = [uk, L, lam](cplx m) { return CMat(uk->eval(L, lam, uk->right(m), m).transpose()); };
        CMat g = ops::apply(ops::Kvee_op(j, zs, p, tau, w, eta), f)(mu);
        CMat rhs = ops::d_multiplier(j, lam, ops::DKind::D_vee, w, B, eta).asDiagonal() * g.transpose();
        return rel(lhs, rhs);
    }
    case Shift::unit: {
        CMat lhs = UKernel(shifted(zs, j, 1.0), tau, p, w, eta, o).eval(lam, mu);
        return rel(lhs, uk->eval(lam, mu));
    }
    }
    return INFINITY;
}

CVec true_solution(const wm::BasisIndex& I, cplx mu, const std::vector<cplx>& zs, cplx lam, cplx tau, cplx p,
                   const wm::HighestWeights& w, cplx eta, const ContourOptions& o) {
    UKernel uk(zs, tau, p, w, eta, o);
    int c = wm::index_of(uk.basis(), I);
    if (c < 0)
        throw Error(Errc::domain, "true_solution: index not in the zero-weight basis");
    CVec v = uk.eval(lam, mu).col(c);
    cplx fac = 1.0;
    for (int i = 0; i < w.n(); ++i) {
        cplx d = ops::d_multiplier(i, mu, ops::DKind::D, w, uk.basis(), eta)(c);
        if (std::abs(d) == 0.0)
            throw Error(Errc::singular, "true_solution: vanishing multiplier");
        fac *= std::exp(-(zs[static_cast<size_t>(i)] / p) * std::log(d));
    }
    return fac * v;
}

double multiplier_z_residual(const wm::BasisIndex& I, int i, cplx mu, const std::vector<cplx>& zs, cplx lam, cplx tau,
                             cplx p, const wm::HighestWeights& w, cplx eta) {
    CVec v0 = true_solution(I, mu, zs, lam, tau, p, w, eta);
    CVec v1 = true_solution(I, mu, shifted(zs, i, 1.0), lam, tau, p, w, eta);
    auto basis = wm::zero_weight_basis(w, w.integral());
    cplx d = ops::d_multiplier(i, mu, ops::DKind::D, w, basis, eta)(wm::index_of(basis, I));
    CVec expect = std::exp(-std::log(d) / p) * v0;
    return (v1 - expect).cwiseAbs().maxCoeff() / v1.cwiseAbs().maxCoeff();
}

double multiplier_lambda_residual(const wm::BasisIndex& I, cplx mu, const std::vector<cplx>& zs, cplx lam, cplx tau,
                                  cplx p, const wm::HighestWeights& w, cplx eta) {
    CVec v0 = true_solution(I, mu, zs, lam, tau, p, w, eta);
    CVec v1 = true_solution(I, mu, zs, lam + 1.0, tau, p, w, eta);
    CVec expect = std::exp(-pi * I1 * (mu + 2.0 * eta * double(w.m())) / (2.0 * eta)) * v0;
    return (v1 - expect).cwiseAbs().maxCoeff() / v1.cwiseAbs().maxCoeff();
}

double doubling_residual(const std::vector<cplx>& zs, cplx lam, cplx mu, cplx tau, cplx p, const wm::HighestWeights& w,
                         cplx eta) {
    ContourOptions a, b;
    b.nline = 2 * a.nline;
    b.ncirc = 2 * a.ncirc;
    return rel(universal_u(zs, lam, mu, tau, p, w, eta, a), universal_u(zs, lam, mu, tau, p, w, eta, b));
}

double contour_shift_residual(const std::vector<cplx>& zs, cplx lam, cplx mu, cplx tau, cplx p,
                              const wm::HighestWeights& w, cplx eta) {
    ContourOptions a, b;
    b.radius_factor = 0.3;
    b.shift_frac = 0.3;
    return rel(universal_u(zs, lam, mu, tau, p, w, eta, a), universal_u(zs, lam, mu, tau, p, w, eta, b));
}

double sigma_translation_residual(cplx mu, cplx tau, cplx sigma, cplx eta) {
    auto fam = families({0.0}, {2.0}, eta, tau, sigma);
    Contour c = build_contour(fam.upper, fam.lower);
    Accum before, after;
    for (size_t q = 0; q < c.nodes.size(); ++q) {
        cplx t = c.nodes[q], wq = c.weights[q];
        before.add(wq * ell::Omega(2.0 * eta, t + sigma, tau, sigma) * th(mu + t, sigma) / th(t - 2.0 * eta, sigma));
        after.add(wq * ell::Omega(2.0 * eta, t, tau, sigma) * th(mu + t - sigma, sigma) /
                  th(t - 2.0 * eta - sigma, sigma));
    }
    return rel_err(before.sum, after.sum);
}

}  // namespace qkzb::hyp
