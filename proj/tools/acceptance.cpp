// One line per acceptance criterion. Tolerances and time budgets are fixed here.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blocks.hpp"
#include "elliptic.hpp"
#include "hyperfun.hpp"
#include "qkzb_ops.hpp"
#include "rmatrix.hpp"
#include "semiclassical.hpp"
#include "shapovalov.hpp"

using namespace qkzb;

namespace {

struct Item {
    std::string what;
    double value;
    double tol;
    bool ok;
};

struct Verdict {
    std::vector<Item> items;
    void below(const std::string& what, double v, double tol) { items.push_back({what, v, tol, v < tol}); }
    std::vector<std::string> info;
    void within(const std::string& what, double v, double lo, double hi) {
        char b[64];
        std::snprintf(b, sizeof b, " in [%g, %g]", lo, hi);
        items.push_back({what + b, v, hi, v >= lo && v <= hi});
    }
    void equal(const std::string& what, int got, int want) {
        items.push_back({what + " = " + std::to_string(want), double(got), double(want), got == want});
    }
};

struct Criterion {
    int id;
    std::string title;
    double seconds;
    std::function<void(Verdict&)> run;
};

const cplx tau{0.1, 0.9}, pmod{-0.05, 0.7}, eta{0.013, -0.05};

void gauss(Verdict& v) {
    double r = 0;
    for (int N = 1; N <= 50; ++N) r = std::max(r, std::abs(shap::gauss_sum(N) - cplx(1, -1) * std::sqrt(double(N))));
    v.below("max |S(N) - (1-i) sqrt N|, N = 1..50", r, 1e-12);
}

void special(Verdict& v) {
    std::mt19937_64 g(20240601);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    double odd = 0, qp = 0, fe = 0, sym = 0, wp = 0;
    for (int k = 0; k < 20; ++k) {
        cplx t{U(g), 0.6 * U(g)}, ta{0.4 * U(g), 0.9 + 0.4 * U(g)}, p{0.4 * U(g), 0.8 + 0.4 * U(g)};
        cplx a = 2.0 * cplx(0.05 * U(g), -0.05 + 0.04 * U(g)), z{0.6 * U(g), 0.1 * U(g)};
        cplx l{0.1 + 0.3 * (U(g) + 0.5), 0.3 * U(g)};
        cplx th = ell::th(t, ta);
        odd = std::max(odd, std::abs(ell::th(-t, ta) + th) / std::max(1.0, std::abs(th)));
        qp = std::max({qp, rel_err(ell::th(t + 2.0, ta), th),
                       rel_err(ell::th(t + 2.0 * ta, ta), std::exp(-4.0 * pi * I1 * (t + ta)) * th)});
        cplx o = ell::Omega(a, z, ta, p);
        fe = std::max(fe, rel_err(ell::Omega(a, z + p, ta, p) / o, e2pi(a) * ell::th(z + a, ta) / ell::th(z - a, ta)));
        sym = std::max(sym, rel_err(o, ell::Omega(a, z, p, ta)));
        cplx d1 = ell::thp(0.0, ta);
        cplx lhs = ell::th(t + l, ta) * ell::th(t - l, ta) / (std::pow(ell::th(t, ta), 2) * std::pow(ell::th(l, ta), 2));
        cplx rhs = (ell::weierstrass_p<double>(l, ta) - ell::weierstrass_p<double>(t, ta)) / (d1 * d1);
        wp = std::max(wp, rel_err(lhs, rhs));
    }
    v.below("theta oddness", odd, 1e-10);
    v.below("theta quasi-periodicity", qp, 1e-10);
    v.below("Omega functional equation", fe, 1e-10);
    v.below("Omega (tau, p) symmetry", sym, 1e-10);
    v.below("wp-theta identity", wp, 1e-10);
}

void rmatrix(Verdict& v) {
    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    auto c = [&] { return cplx(U(g), 0.2 * U(g)); };
    double u1 = 0, y1 = 0, u2 = 0, y2 = 0;
    for (int k = 0; k < 20; ++k) {
        u1 = std::max(u1, rmat::unitarity_residual(1, 1, c(), c(), tau, eta));
        y1 = std::max(y1, rmat::dybe_residual({1, 1, 1}, {c(), c(), c()}, c(), tau, eta));
        for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 2}, {2, 1}, {2, 2}})
            u2 = std::max(u2, rmat::unitarity_residual(a, b, c(), c(), tau, eta));
        for (const auto& W : std::vector<std::array<int, 3>>{{2, 1, 1}, {1, 2, 1}, {1, 1, 2}, {2, 2, 1}, {2, 2, 2}})
            y2 = std::max(y2, rmat::dybe_residual(W, {c(), c(), c()}, c(), tau, eta));
    }
    double l14 = 0, reg = 0;
    for (int L = 1; L <= 2; ++L)
        for (int M = 1; M <= 2; ++M) {
            l14 = std::max(l14, rmat::tau_shift_residual(L, M, {0.21, 0.03}, {0.33, 0.02}, tau, eta));
            reg = std::max(reg, rmat::regularity_probe(L, M, 5, {0.21, 0.03}, {0.33, 0.02}, tau));
        }
    v.below("unitarity (1,1)", u1, 1e-11);
    v.below("DYBE (1,1,1)", y1, 1e-11);
    v.below("unitarity, weights up to 2", u2, 1e-9);
    v.below("DYBE, weights up to 2", y2, 1e-9);
    v.below("R(z + tau) product relation", l14, 1e-9);
    v.below("regularity variation at 2 eta = 1/5 +- 1e-6", reg, 1e-3);
}

void difference_ops(Verdict& v) {
    ops::Grid g;
    cplx e = 1.0 / (2.0 * g.N);
    wm::HighestWeights w({1, 1});
    std::vector<cplx> zs{{0.12, 0.01}, {-0.17, 0.02}};
    double c = std::max(ops::compatibility_residual(false, 0, 1, zs, tau, pmod, w, e, g), ops::compatibility_residual(true, 0, 1, zs, tau, pmod, w, e, g));
    double m = std::max(ops::mirror_residual(0, zs, tau, pmod, w, e, g), ops::mirror_residual(1, zs, tau, pmod, w, e, g));
    v.below("compatibility K and K^vee", c, 1e-9);
    v.below("mirror relation", m, 1e-9);
}

void hyper(Verdict& v) {
    std::vector<cplx> z1{0.0};
    wm::HighestWeights w({2});
    cplx lam{0.23, 0.07}, mu{0.31, -0.05};
    double r = 0;
    for (auto s : {hyp::Shift::p_shift, hyp::Shift::tau_shift, hyp::Shift::unit})
        r = std::max(r, hyp::qkzb_system_residual(s, 0, z1, lam, mu, tau, pmod, w, eta));
    v.below("three difference equations", r, 1e-6);
    v.below("quadrature doubling", hyp::doubling_residual(z1, lam, mu, tau, pmod, w, eta), 1e-9);
}

void heat(Verdict& v) {
    wm::HighestWeights w({1, 1});
    std::vector<cplx> zs{{0.12, 0.01}, {-0.17, 0.02}};
    ops::QkzbConfig q{zs, tau, pmod, eta, w};
    double t1 = 0, l15 = 0, l16 = 0, l17 = 0, t2 = 0;
    for (int j = 0; j < 2; ++j) {
        t1 = std::max({t1, shap::heat_intertwining_residual(j, zs, tau, pmod, w, eta, 1), shap::heat_vee_intertwining_residual(j, zs, tau, pmod, w, eta, 1)});
        l16 = std::max({l16, ops::alpha_conjugation_residual(j, q, false, 5), ops::alpha_conjugation_residual(j, q, true, 5)});
        l17 = std::max({l17, shap::adjointness_residual(j, false, zs, tau, pmod, w, eta, 3),
                        shap::adjointness_residual(j, true, zs, tau, pmod, w, eta, 3)});
        t2 = std::max(t2, shap::finite_heat_intertwining_residual(j, zs, tau, pmod, ops::Grid{}, w));
    }
    for (int L = 1; L <= 2; ++L)
        for (int M = 1; M <= 2; ++M) l15 = std::max(l15, shap::r_symmetry_residual(L, M, {0.27, 0.03}, {0.21, 0.04}, tau, eta));
    v.below("heat operator intertwines K_j and K^vee_j, n = 2", t1, 1e-5);
    v.below("Shapovalov symmetry of R", l15, 1e-6);
    v.below("alpha and D conjugation of K_j", l16, 1e-6);
    v.below("Shapovalov adjointness of K_j and K^vee_j", l17, 1e-6);
    v.below("finite heat operator intertwines K_j, N = 5", t2, 1e-8);
}

void composition(Verdict& v) {
    auto r = shap::composition_constant({0.0}, tau, pmod, wm::HighestWeights({2}), eta,
                                    {{{0.23, 0.07}, {0.31, -0.05}}, {{-0.1, 0.02}, {0.4, 0.01}}, {{0.05, -0.03}, {-0.2, 0.04}}});
    v.below("U/u spread", r.spread, 1e-4);
    v.below("U/u against -e^{4 pi i eta}/(2 pi sqrt(4 i eta))", r.rel_to_expected, 1e-3);
    auto rr = shap::rational_constant(3, tau, pmod);
    v.below("u - C_N U_N at N = 3", rr.residual_literal, 1e-7);
    char b[256];
    std::snprintf(b, sizeof b, "measured U/u = %.12g%+.12gi, expected %.12g%+.12gi, distance from 1/expected %.2e",
                  r.measured.real(), r.measured.imag(), r.expected.real(), r.expected.imag(), r.rel_to_inverse);
    v.info.push_back(b);
    cplx ratio = rr.measured / rr.CN;
    std::snprintf(b, sizeof b, "measured u/U_N = C_N * (%.12g%+.12gi), 1/(2 pi) = %.12g", ratio.real(), ratio.imag(), 1.0 / (2 * pi));
    v.info.push_back(b);
}

void blocks(Verdict& v) {
    cplx e{0.004, -0.03};
    double th = 0;
    for (int j = 0; j < 4; ++j) th = std::max(th, blk::theta_identity_residual(j, 4, e, tau, {0.21, 0.05}));
    v.below("theta_{j,4} heat identity", th, 1e-8);
    for (auto [k, m] : std::vector<std::pair<int, int>>{{4, 0}, {5, 1}, {6, 1}}) {
        auto d = blk::dim_E_numeric(k, m, e, tau);
        v.equal("dim E(" + std::to_string(k) + "," + std::to_string(2 * m) + ")", d.nullity, k - 2 * m - 1);
    }
    cplx sig = tau - 2.0 * e * 5.0;
    blk::Fn1 in = [=](cplx l) { return ell::th(l, sig) * ell::th(l - 2.0 * e, sig) * ell::theta_level<double>(0, 1, l, sig); };
    blk::HeatTKappaM T(5, 1, e, tau, in);
    v.below("T_{5,1} image membership", blk::membership(5, 1, e, tau, T.fn()).max(), 1e-6);
    double vr = 0;
    for (auto [r, s] : std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {-1, 0}, {0, -1}})
        vr = std::max(vr, blk::v_residue_residual(r, s, {0.17, 0.02}, tau, sig, e));
    v.below("V-kernel residue identities", vr, 1e-6);
    blk::ModularElement S(0, -1, 1, 0), Tm(1, 1, 0, 1), G(2, 1, 1, 1);
    double coc = std::max(blk::cocycle_residual(S, Tm, 3, tau, blk::PsiReading::ctau),
                          blk::cocycle_residual(G, S, 3, tau, blk::PsiReading::ctau));
    v.below("cocycle", coc, 1e-9);
    double nab = 0;
    for (int j = 0; j < 3; ++j) {
        auto sec = blk::horizontal_section(j, 4);
        cplx l{0.21, 0.05};
        nab = std::max(nab, std::abs(blk::kzb_connection(4, 0, sec, l, tau).value) / std::abs(sec(l, tau)));
    }
    v.below("horizontal sections", nab, 1e-5);
}

void semiclassical(Verdict& v) {
    auto r = semi::semiclassical_residual();
    v.below("O(1) term against v_0", r.g0_max_error, 1e-4);
    v.below("c(tau) lambda-spread", r.c_spread, 1e-2);
    v.within("remainder slope min", r.slope_min, 1.8, 2.2);
    v.within("remainder slope max", r.slope_max, 1.8, 2.2);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    int only = 0;
    app.add_option("--only", only, "run a single criterion")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all{
        {1, "Gauss sums", 1, gauss},
        {2, "special functions", 5, special},
        {3, "R-matrix", 30, rmatrix},
        {4, "qKZB compatibility and mirror", 10, difference_ops},
        {5, "hypergeometric u", 60, hyper},
        {6, "heat compatibility", 300, heat},
        {7, "composition constant at total weight 2", 300, composition},
        {8, "blocks", 300, blocks},
        {9, "semiclassical", 600, semiclassical},
    };
    bool all_ok = true;
    for (const auto& c : all) {
        if (only && c.id != only) continue;
        Verdict v;
        auto t0 = std::chrono::steady_clock::now();
        std::string err;
        try {
            c.run(v);
        } catch (const std::exception& e) {
            err = e.what();
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool ok = err.empty() && dt < c.seconds;
        for (const auto& it : v.items) ok = ok && it.ok;
        all_ok = all_ok && ok;
        std::printf("%s %d %s (%.2f s of %.0f s)\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), dt, c.seconds);
        for (const auto& it : v.items)
            std::printf("    %s %s: %.3e (limit %.1e)\n", it.ok ? "ok  " : "FAIL", it.what.c_str(), it.value, it.tol);
        for (const auto& s : v.info) std::printf("    note %s\n", s.c_str());
        if (!err.empty()) std::printf("    error: %s\n", err.c_str());
        std::fflush(stdout);
    }
    return all_ok ? 0 : 1;
}
