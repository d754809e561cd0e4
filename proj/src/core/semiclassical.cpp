#include "semiclassical.hpp"

#include <cmath>

#include "elliptic.hpp"
#include "hyperfun.hpp"
#include "parallel.hpp"
#include "shapovalov.hpp"

namespace qkzb::semi {

using ell::th;

cplx default_w(cplx lam, cplx tau) { return std::exp(0.4 * lam) * (1.0 + 0.3 * tau * lam * lam); }

std::vector<cplx> SemiOptions::resolved_etas() const {
    if (!etas.empty()) return etas;
    std::vector<cplx> e;
    for (int k = 1; k <= 5; ++k) e.push_back(cplx(0.0, -0.04) * std::pow(2.0, -k));
    return e;
}

cplx qkzb1_rhs(cplx lam, cplx eta, const SemiOptions& o, const Fn2& w) {
    cplx sig = o.tau - 2.0 * double(o.kappa) * eta;
    hyp::ContourOptions co;
    co.nline = o.nline;
    co.ncirc = o.ncirc;
    hyp::UKernel uk({0.0}, o.tau, sig, wm::HighestWeights({2.0}), eta, co);
    CMat L = uk.left(lam);
    shap::IntegrationPath path;
    path.offset = -lam;
    path.hs = o.hs;
    path.tmax = shap::default_tmax(eta, o.budget);
    cplx integral = shap::integrate_path(eta, path, [&](cplx mu) {
        cplx u = uk.eval(L, lam, uk.right(mu), mu)(0, 0);
        cplx v0 = th(-mu, sig) * w(-mu, sig);
        return u * shap::q_single(1, 2.0, mu, sig, eta) * v0 * ell::alpha(mu, eta);
    });
    return -1.0 / (4.0 * pi * std::sqrt(I1 * eta)) * ell::alpha(lam, eta) * integral;
}

namespace {

cplx d2_lambda(const Fn2& f, cplx lam, cplx tau, double h) {
    return (-f(lam + 2.0 * h, tau) + 16.0 * f(lam + h, tau) - 30.0 * f(lam, tau) + 16.0 * f(lam - h, tau) -
            f(lam - 2.0 * h, tau)) /
           (12.0 * h * h);
}

cplx d_tau(const Fn2& f, cplx lam, cplx tau, cplx dt) { return (f(lam, tau + dt) - f(lam, tau - dt)) / (2.0 * dt); }

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double n = double(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

cplx kzb_heat_apply(int kappa, const Fn2& v, cplx lam, cplx tau, double h, cplx dtau) {
    cplx v0 = v(lam, tau);
    cplx lap = d2_lambda(v, lam, tau, h);
    return 2.0 * pi * I1 * double(kappa) * d_tau(v, lam, tau, dtau) - (lap - 2.0 * ell::weierstrass_p<double>(lam, tau) * v0);
}

ExpansionReport semiclassical_residual(const SemiOptions& o, const Fn2& w) {
    ExpansionReport rep;
    rep.etas = o.resolved_etas();
    const size_t ne = rep.etas.size(), nl = o.lambdas.size();
    if (ne < 3) throw Error(Errc::invalid_config, "semiclassical: at least 3 eta values are needed");
    for (size_t k = 1; k < ne; ++k)
        if (!(std::abs(rep.etas[k]) < std::abs(rep.etas[k - 1])))
            throw Error(Errc::invalid_config, "semiclassical: eta sequence must decrease in magnitude");
    std::vector<cplx> R(ne * nl);
    parallel_for(ne * nl, [&](size_t i) { R[i] = qkzb1_rhs(o.lambdas[i % nl], rep.etas[i / nl], o, w); });

    CMat V(ne, ne);
    for (size_t r = 0; r < ne; ++r)
        for (size_t c = 0; c < ne; ++c) V(Eigen::Index(r), Eigen::Index(c)) = std::pow(rep.etas[r], int(c));
    auto lu = V.fullPivLu();
    cplx csum = 0;
    rep.slope_min = INFINITY;
    rep.slope_max = -INFINITY;
    for (size_t l = 0; l < nl; ++l) {
        ExpansionPoint pt;
        pt.lambda = o.lambdas[l];
        CVec rhs(ne);
        for (size_t k = 0; k < ne; ++k) rhs(Eigen::Index(k)) = R[k * nl + l];
        CVec g = lu.solve(rhs);
        pt.g0 = g(0);
        pt.g1 = g(1);
        cplx lam = pt.lambda;
        pt.g0_error = std::abs(pt.g0 - th(lam, o.tau) * w(lam, o.tau));
        cplx w0 = w(lam, o.tau);
        cplx w2 = d2_lambda(w, lam, o.tau, o.h_lambda);
        cplx wt = d_tau(w, lam, o.tau, o.dtau);
        cplx wp = ell::weierstrass_p<double>(lam, o.tau);
        pt.c = (pt.g1 / th(lam, o.tau) - w2 / (I1 * pi) + 2.0 * double(o.kappa) * wt + 2.0 / (pi * I1) * wp * w0) / w0;
        std::vector<double> lx, ly;
        for (size_t k = 0; k < ne; ++k) {
            lx.push_back(std::log(std::abs(rep.etas[k])));
            ly.push_back(std::log(std::abs(rhs(Eigen::Index(k)) - pt.g0 - pt.g1 * rep.etas[k])));
        }
        pt.slope = fit_slope(lx, ly);
        rep.g0_max_error = std::max(rep.g0_max_error, pt.g0_error);
        rep.slope_min = std::min(rep.slope_min, pt.slope);
        rep.slope_max = std::max(rep.slope_max, pt.slope);
        csum += pt.c;
        rep.points.push_back(pt);
    }
    rep.c_mean = csum / double(nl);
    for (const auto& p : rep.points)
        rep.c_spread = std::max(rep.c_spread, std::abs(p.c - rep.c_mean) / std::max(1.0, std::abs(rep.c_mean)));
    rep.c_heat = I1 * pi * rep.c_mean;
    rep.eta_term = 2.0 * pi * I1 * double(o.kappa) * ell::dedekind_eta_logderiv<double>(o.tau);
    rep.residue_split = residue_split_residual(o.lambdas[0], -o.lambdas[0], o.tau, o.kappa, rep.etas[0]);
    for (cplx e : rep.etas) rep.omega_tilde_dev.push_back(std::abs(omega_tilde(e, o.tau, o.kappa) - 1.0));
    return rep;
}

namespace {

nlohmann::json cj(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace

nlohmann::json to_json(const ExpansionReport& r) {
    nlohmann::json j;
    j["eta_sequence"] = nlohmann::json::array();
    for (cplx e : r.etas) j["eta_sequence"].push_back(cj(e));
    j["points"] = nlohmann::json::array();
    for (const auto& p : r.points)
        j["points"].push_back({{"lambda", cj(p.lambda)},
                               {"v0_fit", cj(p.g0)},
                               {"v1_fit", cj(p.g1)},
                               {"v0_error", p.g0_error},
                               {"c", cj(p.c)},
                               {"slope", p.slope}});
    j["v0_max_error"] = r.g0_max_error;
    j["c_mean"] = cj(r.c_mean);
    j["c_spread"] = r.c_spread;
    j["slope_range"] = {r.slope_min, r.slope_max};
    j["c_heat"] = cj(r.c_heat);
    j["eta_logderiv_term"] = cj(r.eta_term);
    j["residue_split"] = r.residue_split;
    j["omega_tilde_deviation"] = r.omega_tilde_dev;
    return j;
}

double gaussian_asymptotic_slope(cplx lam, const std::vector<cplx>& etas, double* max_rel_first) {
    auto g = [](cplx mu, cplx eta) { return std::exp(0.3 * mu + 0.2 * mu * mu) * (1.0 + 0.5 * eta + 0.7 * eta * eta); };
    cplx g0 = g(lam, 0.0);
    cplx gmm = ((0.3 + 0.4 * lam) * (0.3 + 0.4 * lam) + 0.4) * g0;
    cplx geta = 0.5 * g0;
    std::vector<double> lx, ly;
    double first = 0;
    for (cplx eta : etas) {
        shap::IntegrationPath path;
        path.offset = -lam;
        path.hs = 0.4;
        path.tmax = shap::default_tmax(eta, 60.0);
        cplx I = I1 / std::sqrt(4.0 * I1 * eta) * shap::integrate_path(eta, path, [&](cplx mu) {
                     return std::exp(-I1 * pi * (lam + mu) * (lam + mu) / (4.0 * eta)) * g(-mu, eta);
                 });
        cplx two = g0 + eta * (gmm / (I1 * pi) + geta);
        first = std::max(first, std::abs(I - g0) / std::abs(g0));
        lx.push_back(std::log(std::abs(eta)));
        ly.push_back(std::log(std::abs(I - two)));
    }
    if (max_rel_first) *max_rel_first = first;
    return fit_slope(lx, ly);
}

double residue_split_residual(cplx lam, cplx mu, cplx tau, int kappa, cplx eta) {
    cplx sig = tau - 2.0 * double(kappa) * eta;
    auto fam = hyp::families({0.0}, {2.0}, eta, tau, sig);
    hyp::Contour full = hyp::build_contour(fam.upper, fam.lower);
    auto f = [&](cplx t) {
        return ell::Omega(2.0 * eta, t, tau, sig) * th(lam + t, tau) * th(mu + t, sig) /
               (th(t - 2.0 * eta, tau) * th(t - 2.0 * eta, sig));
    };
    auto integrate = [&](const hyp::Contour& c) {
        Accum a;
        for (size_t q = 0; q < c.nodes.size(); ++q) a.add(c.weights[q] * f(c.nodes[q]));
        return a.sum;
    };
    // move the pinching point 2 eta to the other side of the cycle
    cplx target = 2.0 * eta;
    hyp::PoleFamilies moved;
    bool found = false;
    for (cplx q : fam.upper) {
        if (!found && std::abs(q - target) < 1e-14)
            found = true;
        else
            moved.upper.push_back(q);
    }
    if (!found) throw Error(Errc::contour_pinch, "residue split: 2 eta is not a pole of the kernel");
    moved.lower = fam.lower;
    moved.lower.push_back(target);
    // line just above both +-2 eta
    double top = std::max(target.imag(), -target.imag()), next = top + 1.0;
    for (cplx q : moved.upper)
        if (q.imag() > top + 1e-12) next = std::min(next, q.imag());
    for (cplx q : moved.lower)
        if (q.imag() > top + 1e-12) next = std::min(next, q.imag());
    hyp::ContourOptions co;
    co.height = 0.5 * (top + next);
    hyp::Contour bar = hyp::build_contour(moved.upper, moved.lower, co);
    for (const auto& c : bar.circles)
        if (std::abs(c.center - (target - std::floor(target.real() + 0.5))) < 1e-12)
            throw Error(Errc::contour_pinch, "residue split: cycle does not clear t = 2 eta");
    double r = std::min(1e-3, 0.25 * std::abs(4.0 * eta));
    Accum res;
    const int n = 32;
    for (int k = 0; k < n; ++k) {
        cplx q = e2pi(double(k) / n);
        res.add(f(target + r * q) * r * q);
    }
    cplx split = integrate(bar) + 2.0 * pi * I1 * res.sum / double(n);
    return rel_err(split, integrate(full));
}

cplx omega_tilde(cplx eta, cplx tau, int kappa) {
    cplx sig = tau - 2.0 * double(kappa) * eta;
    double r = 0.5 * std::abs(eta);
    Accum a;
    const int n = 16;
    for (int k = 0; k < n; ++k) {
        cplx t = 2.0 * eta + r * e2pi(double(k) / n);
        a.add(ell::Omega(2.0 * eta, t, tau, sig) * (1.0 - e2pi(t + 2.0 * eta)) / (1.0 - e2pi(t - 2.0 * eta)));
    }
    return a.sum / double(n);
}

}  // namespace qkzb::semi
