#include "harness.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "blocks.hpp"
#include "elliptic.hpp"
#include "hyperfun.hpp"
#include "parallel.hpp"
#include "qkzb_ops.hpp"
#include "rmatrix.hpp"
#include "semiclassical.hpp"
#include "shapovalov.hpp"
#include "weights.hpp"

#ifndef QKZB_BUILD_TIME
#define QKZB_BUILD_TIME "unknown"
#endif

namespace qkzb::harness {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(Errc::invalid_config, msg); }

cplx to_cplx(const json& v, const std::string& key) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    if (v.is_string()) {
        try {
            return parse_complex(v.get<std::string>());
        } catch (const Error&) {
        }
    }
    bad("parameter '" + key + "': expected a complex number");
}

// parameter view over defaults merged with overrides
struct Params {
    json j;
    cplx c(const std::string& k) const { return to_cplx(j.at(k), k); }
    cplx modulus(const std::string& k) const {
        cplx t = c(k);
        if (!(t.imag() > 0)) bad("parameter '" + k + "': imaginary part must be positive");
        return t;
    }
    double r(const std::string& k) const {
        if (!j.at(k).is_number()) bad("parameter '" + k + "': expected a real number");
        return j.at(k).get<double>();
    }
    int i(const std::string& k) const {
        const json& v = j.at(k);
        if (!v.is_number_integer()) bad("parameter '" + k + "': expected an integer");
        return v.get<int>();
    }
    std::vector<cplx> cs(const std::string& k) const {
        const json& v = j.at(k);
        if (!v.is_array() || v.empty()) bad("parameter '" + k + "': expected a nonempty list");
        std::vector<cplx> out;
        for (const auto& e : v) out.push_back(to_cplx(e, k));
        return out;
    }
    std::vector<double> rs(const std::string& k) const {
        const json& v = j.at(k);
        if (!v.is_array() || v.empty()) bad("parameter '" + k + "': expected a nonempty list");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) bad("parameter '" + k + "': expected real entries");
            out.push_back(e.get<double>());
        }
        return out;
    }
    wm::HighestWeights weights(const std::string& k) const {
        try {
            return wm::HighestWeights(rs(k));
        } catch (const Error& e) {
            bad("parameter '" + k + "': " + e.what());
        }
    }
};

struct Ctx {
    Params ps;
    json quad;
    unsigned long seed = 1;
    double q(const std::string& k, double dflt) const {
        return quad.contains(k) ? quad.at(k).get<double>() : dflt;
    }
};

struct Outcome {
    double residual = 0;
    std::vector<std::string> notes;
};

struct CheckDef {
    std::string name;
    double tolerance;
    std::function<Outcome(const Ctx&)> run;
};

struct SuiteDef {
    std::string name;
    json defaults;
    std::vector<std::string> notes;
    std::vector<CheckDef> checks;
};

std::mt19937_64 rng_for(const Ctx& c, int salt) { return std::mt19937_64(c.seed * 1000003ULL + unsigned(salt)); }

std::string sci(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3e", v);
    return b;
}

// suites

SuiteDef gauss_suite() {
    SuiteDef s{"gauss-sums", {{"N_max", 50}}, {}, {}};
    s.checks.push_back({"closed_form", 1e-12, [](const Ctx& c) {
                            int nmax = c.ps.i("N_max");
                            if (nmax < 1) bad("parameter 'N_max': must be positive");
                            double r = 0;
                            for (int N = 1; N <= nmax; ++N)
                                r = std::max(r, std::abs(shap::gauss_sum(N) - cplx(1, -1) * std::sqrt(double(N))));
                            return Outcome{r, {}};
                        }});
    return s;
}

struct EllDraw {
    cplx t, tau, p, a, z;
};

std::vector<EllDraw> ell_draws(const Ctx& c, int salt) {
    int n = c.ps.i("draws");
    if (n < 1) bad("parameter 'draws': must be positive");
    auto g = rng_for(c, salt);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    std::vector<EllDraw> out;
    for (int k = 0; k < n; ++k) {
        EllDraw d;
        d.t = {U(g), 0.6 * U(g)};
        d.tau = {0.4 * U(g), 0.9 + 0.4 * U(g)};
        d.p = {0.4 * U(g), 0.8 + 0.4 * U(g)};
        d.a = 2.0 * cplx(0.05 * U(g), -0.05 + 0.04 * U(g));
        d.z = {0.6 * U(g), 0.1 * U(g)};
        out.push_back(d);
    }
    return out;
}

SuiteDef elliptic_suite() {
    SuiteDef s{"elliptic-core", {{"draws", 20}, {"tau", {0.1, 0.9}}}, {}, {}};
    s.checks.push_back({"theta_oddness", 1e-10, [](const Ctx& c) {
                            double r = 0;
                            for (const auto& d : ell_draws(c, 1)) {
                                cplx v = ell::th(d.t, d.tau);
                                r = std::max(r, std::abs(ell::th(-d.t, d.tau) + v) / std::max(1.0, std::abs(v)));
                            }
                            return Outcome{r, {}};
                        }});
    s.checks.push_back({"theta_quasi_periodicity", 1e-10, [](const Ctx& c) {
                            double r = 0;
                            for (const auto& d : ell_draws(c, 2)) {
                                cplx v = ell::th(d.t, d.tau);
                                r = std::max({r, rel_err(ell::th(d.t + 2.0, d.tau), v),
                                              rel_err(ell::th(d.t + 2.0 * d.tau, d.tau),
                                                      std::exp(-4.0 * pi * I1 * (d.t + d.tau)) * v)});
                            }
                            return Outcome{r, {}};
                        }});
    s.checks.push_back({"omega_symmetry_and_functional_equation", 1e-10, [](const Ctx& c) {
                            double r = 0;
                            for (const auto& d : ell_draws(c, 3)) {
                                cplx o = ell::Omega(d.a, d.z, d.tau, d.p);
                                r = std::max({r, rel_err(o, ell::Omega(d.a, d.z, d.p, d.tau)),
                                              rel_err(ell::Omega(d.a, d.z + d.p, d.tau, d.p) / o,
                                                      e2pi(d.a) * ell::th(d.z + d.a, d.tau) /
                                                          ell::th(d.z - d.a, d.tau))});
                            }
                            return Outcome{r, {}};
                        }});
    s.checks.push_back({"wp_theta_identity", 1e-10, [](const Ctx& c) {
                            cplx tau = c.ps.modulus("tau");
                            cplx d1 = ell::thp(0.0, tau);
                            double r = 0;
                            for (int a = 0; a < 5; ++a)
                                for (int b = 0; b < 5; ++b) {
                                    cplx t{0.07 + 0.17 * a, 0.05 + 0.15 * b}, l{0.11 + 0.16 * b, -0.2 + 0.1 * a};
                                    cplx lhs = ell::th(t + l, tau) * ell::th(t - l, tau) /
                                               (std::pow(ell::th(t, tau), 2) * std::pow(ell::th(l, tau), 2));
                                    cplx rhs = (ell::weierstrass_p<double>(l, tau) - ell::weierstrass_p<double>(t, tau)) /
                                               (d1 * d1);
                                    r = std::max(r, rel_err(lhs, rhs));
                                }
                            return Outcome{r, {}};
                        }});
    s.checks.push_back(
        {"truncation_doubling", ell::default_truncation().target_abs_err, [](const Ctx& c) {
             ell::Truncation t2;
             t2.series_terms = 60;
             t2.product_terms = 2 * ell::default_truncation().product_terms;
             t2.target_abs_err = 1e-20;
             double r = 0;
             for (const auto& d : ell_draws(c, 4)) {
                 r = std::max({r, std::abs(ell::th(d.t, d.tau) - ell::theta<double>(d.t, d.tau, t2)),
                               std::abs(ell::thp(d.t, d.tau) - ell::theta_prime<double>(d.t, d.tau, t2)),
                               std::abs(ell::Omega(d.a, d.z, d.tau, d.p) - ell::omega_phase<double>(d.a, d.z, d.tau, d.p, t2)),
                               std::abs(ell::dedekind_eta<double>(d.tau) - ell::dedekind_eta<double>(d.tau, t2))});
             }
             return Outcome{r, {}};
         }});
    return s;
}

SuiteDef weights_suite() {
    SuiteDef s{"weight-modules",
               {{"max_weight", 8}, {"mu", {0.21, 0.04}}, {"tau", {0.1, 0.9}}, {"eta", {0.013, -0.05}}},
               {}, {}};
    s.checks.push_back({"single_slot_basis_size", 0.0, [](const Ctx& c) {
                            int mx = c.ps.i("max_weight");
                            if (mx < 0) bad("parameter 'max_weight': must be nonnegative");
                            int bad_count = 0;
                            std::vector<double> Ls;
                            for (int L = 0; L <= mx; ++L) Ls.push_back(L);
                            for (double L : {0.5, 1.5, -2.0}) Ls.push_back(L);
                            for (double L : Ls) {
                                bool even = L >= 0 && std::abs(L / 2 - std::round(L / 2)) < 1e-12;
                                size_t got = 0;
                                bool index_ok = true;
                                try {
                                    wm::HighestWeights w({L});
                                    auto b = wm::zero_weight_basis(w, true);
                                    got = b.size();
                                    if (got == 1) index_ok = b[0][0] == int(std::lround(L / 2));
                                } catch (const Error&) {
                                    got = 0;
                                }
                                if (got != (even ? 1u : 0u) || !index_ok) ++bad_count;
                            }
                            return Outcome{double(bad_count), {}};
                        }});
    s.checks.push_back({"flip_involution_and_grading", 1e-15, [](const Ctx& c) {
                            auto g = rng_for(c, 11);
                            std::normal_distribution<double> N(0, 1);
                            double r = 0;
                            for (const auto& Ls : std::vector<std::vector<double>>{{1, 2, 1}, {2, 0}, {1, 1, 2, 2}, {0.5, 1.5}}) {
                                wm::HighestWeights w(Ls);
                                auto basis = wm::zero_weight_basis(w, false);
                                wm::ZeroWeightVector v, u, comb;
                                cplx a{N(g), N(g)}, b{N(g), N(g)};
                                for (const auto& I : basis) {
                                    v[I] = {N(g), N(g)};
                                    u[I] = {N(g), N(g)};
                                    comb[I] = a * v[I] + b * u[I];
                                }
                                auto fv = wm::flip_P(v, w), fu = wm::flip_P(u, w), fc = wm::flip_P(comb, w);
                                auto back = wm::flip_P(fv, w.reversed());
                                wm::HighestWeights wr = w.reversed();
                                for (const auto& I : basis) r = std::max(r, std::abs(back[I] - v[I]));
                                for (const auto& [J, x] : fc) {
                                    r = std::max(r, std::abs(x - (a * fv[J] + b * fu[J])));
                                    double wt = 0;
                                    for (int k = 0; k < wr.n(); ++k) wt += wm::slot_weight(J, wr, k);
                                    if (std::abs(wt) > 1e-12) r = std::max(r, 1.0);
                                }
                            }
                            return Outcome{r, {}};
                        }});
    s.checks.push_back({"admissible_support", 0.0, [](const Ctx& c) {
                            cplx mu = c.ps.c("mu"), tau = c.ps.modulus("tau"), eta = c.ps.c("eta");
                            int mism = 0;
                            for (const auto& Ls : std::vector<std::vector<double>>{{1, 1}, {2, 2}, {2, 1, 1}, {1, 3}, {4}}) {
                                wm::HighestWeights w(Ls);
                                auto basis = wm::zero_weight_basis(w, false);
                                std::vector<double> mag;
                                double mx = 0;
                                for (const auto& I : basis) {
                                    mag.push_back(std::abs(shap::q_index(I, mu, tau, w, eta)));
                                    mx = std::max(mx, mag.back());
                                }
                                for (size_t k = 0; k < basis.size(); ++k)
                                    if (wm::is_admissible(basis[k], w) != (mag[k] > 1e-12 * mx)) ++mism;
                            }
                            return Outcome{double(mism), {}};
                        }});
    return s;
}

SuiteDef rmatrix_suite() {
    SuiteDef s{"rmatrix",
               {{"tau", {0.1, 0.9}}, {"eta", {0.013, -0.05}}, {"draws", 20}, {"N", 5}},
               {"fundamental R: basis e_0, e_1 with e_1 of weight -1",
                "higher weights by fusion onto the symmetric subspace"},
               {}};
    auto draws = [](const Ctx& c, int salt) {
        int n = c.ps.i("draws");
        if (n < 1) bad("parameter 'draws': must be positive");
        auto g = rng_for(c, salt);
        std::uniform_real_distribution<double> U(-0.5, 0.5);
        std::vector<std::array<cplx, 4>> out;
        for (int k = 0; k < n; ++k)
            out.push_back({cplx(U(g), 0.2 * U(g)), cplx(U(g), 0.2 * U(g)), cplx(U(g), 0.2 * U(g)), cplx(U(g), 0.2 * U(g))});
        return out;
    };
    const std::vector<std::pair<int, int>> pairs{{1, 1}, {1, 2}, {2, 1}, {2, 2}};
    s.checks.push_back({"weight_preservation", 1e-13, [=](const Ctx& c) {
                            cplx tau = c.ps.modulus("tau"), eta = c.ps.c("eta");
                            double r = 0;
                            for (const auto& d : draws(c, 21))
                                for (auto [a, b] : pairs)
                                    r = std::max(r, rmat::weight_commutator_residual(a, b, d[0], d[1], tau, eta));
                            return Outcome{r, {}};
                        }});
    s.checks.push_back({"unitarity_and_dybe", 1e-9, [=](const Ctx& c) {
                            cplx tau = c.ps.modulus("tau"), eta = c.ps.c("eta");
                            double u = 0, y = 0;
                            for (const auto& d : draws(c, 22)) {
                                for (auto [a, b] : pairs) u = std::max(u, rmat::unitarity_residual(a, b, d[0], d[1], tau, eta));
                                for (const auto& W : std::vector<std::array<int, 3>>{{1, 1, 1}, {2, 1, 1}, {1, 2, 1}, {1, 1, 2}, {2, 2, 2}})
                                    y = std::max(y, rmat::dybe_residual(W, {d[0], d[1], d[2]}, d[3], tau, eta));
                            }
                            std::vector<std::string> notes{"unitarity " + sci(u) + ", dybe " + sci(y)};
                            for (auto rd : {rmat::TauShiftReading::product, rmat::TauShiftReading::sum, rmat::TauShiftReading::none})
                                notes.push_back(std::string("R(z + tau) exponent, ") + rmat::reading_name(rd) + " reading: " +
                                                sci(rmat::tau_shift_residual(1, 1, {0.21, 0.03}, {0.33, 0.02}, tau, eta, rd)));
                            return Outcome{std::max(u, y), notes};
                        }});
    s.checks.push_back({"regularity_at_rational_eta", 1e-3, [=](const Ctx& c) {
                            cplx tau = c.ps.modulus("tau");
                            int N = c.ps.i("N");
                            double r = 0;
                            for (auto [a, b] : pairs) {
                                if (N <= std::max(a, b)) bad("parameter 'N': must exceed the weights");
                                r = std::max(r, rmat::regularity_probe(a, b, N, {0.21, 0.03}, {0.33, 0.02}, tau));
                            }
                            return Outcome{r, {}};
                        }});
    s.checks.push_back({"submodule_preservation", 1e-9, [=](const Ctx& c) {
                            cplx tau = c.ps.modulus("tau"), eta = c.ps.c("eta");
                            double r = 0;
                            for (const auto& d : draws(c, 23))
                                for (auto [a, b] : pairs) {
                                    double leak = 0;
                                    rmat::r_fused(a, b, d[0], d[1], tau, eta, &leak);
                                    r = std::max(r, leak);
                                }
                            return Outcome{r, {}};
                        }});
    return s;
}

SuiteDef ops_suite() {
    SuiteDef s{"qkzb-ops",
               {{"N", 5},
                {"eps", {0.2357, 0.0113}},
                {"tau", {0.1, 0.9}},
                {"p", {-0.05, 0.7}},
                {"zs", {{0.12, 0.01}, {-0.17, 0.02}}},
                {"weights", {1, 1}}},
               {"eta = 1/(2N) on the grid eps + Z/N"},
               {}};
    auto setup = [](const Ctx& c) {
        ops::Grid g;
        g.N = c.ps.i("N");
        if (g.N < 2) bad("parameter 'N': must be at least 2");
        g.eps = c.ps.c("eps");
        ops::QkzbConfig q{c.ps.cs("zs"), c.ps.modulus("tau"), c.ps.modulus("p"), 1.0 / (2.0 * g.N), c.ps.weights("weights")};
        if (int(q.zs.size()) != q.weights.n()) bad("parameters 'zs' and 'weights' differ in length");
        if (!q.weights.integral()) bad("parameter 'weights': integer weights are needed on the grid");
        return std::pair{g, q};
    };
    s.checks.push_back({"compatibility", 1e-9, [=](const Ctx& c) {
                            auto [g, q] = setup(c);
                            double r = 0;
                            for (int j = 0; j < q.weights.n(); ++j)
                                for (int l = j + 1; l < q.weights.n(); ++l)
                                    for (bool vee : {false, true})
                                        r = std::max(r, ops::compatibility_residual(vee, j, l, q.zs, q.tau, q.p, q.weights, q.eta, g));
                            return Outcome{r, {}};
                        }});
    s.checks.push_back({"zero_weight_preservation", 1e-14, [=](const Ctx& c) {
                            auto [g, q] = setup(c);
                            std::vector<int> dims;
                            for (double L : q.weights.lambdas()) dims.push_back(int(std::lround(L)));
                            const int n = int(dims.size());
                            auto gen = rng_for(c, 31);
                            std::uniform_real_distribution<double> U(-0.5, 0.5);
                            int total = 1;
                            for (int d : dims) total *= d + 1;
                            auto weight = [&](int st) {
                                double w = 0;
                                for (int k = n - 1; k >= 0; --k) {
                                    w += dims[size_t(k)] - 2 * (st % (dims[size_t(k)] + 1));
                                    st /= dims[size_t(k)] + 1;
                                }
                                return w;
                            };
                            double r = 0;
                            for (int j = 0; j < n; ++j)
                                for (int k = 0; k < n; ++k) {
                                    if (j == k) continue;
                                    std::vector<int> spect;
                                    for (int l = 0; l < n; ++l)
                                        if (l != j && l != k) spect.push_back(l);
                                    CMat R = rmat::embed_R(dims, j, k, {U(gen), 0.1 * U(gen)}, {U(gen), 0.1 * U(gen)}, spect,
                                                           q.tau, q.eta);
                                    double sc = max_abs(R);
                                    for (int a = 0; a < total; ++a)
                                        for (int b = 0; b < total; ++b)
                                            if (std::abs(weight(a) - weight(b)) > 1e-12)
                                                r = std::max(r, std::abs(R(a, b)) / sc);
                                }
                            return Outcome{r, {}};
                        }});
    s.checks.push_back({"linearity", 1e-13, [=](const Ctx& c) {
                            auto [g, q] = setup(c);
                            double r = 0;
                            for (int j = 0; j < q.weights.n(); ++j)
                                r = std::max(r, ops::linearity_residual(j, q, g, unsigned(c.seed + j)));
                            return Outcome{r, {}};
                        }});
    s.checks.push_back({"grid_operators_finite", 1e10, [=](const Ctx& c) {
                            auto [g, q] = setup(c);
                            double m = ops::grid_max_entry(q, g);
                            return Outcome{std::isfinite(m) ? m : INFINITY, {"largest grid matrix entry " + sci(m)}};
                        }});
    return s;
}

SuiteDef hyper_suite() {
    SuiteDef s{"hyperfun",
               {{"tau", {0.1, 0.9}},
                {"p", {-0.05, 0.7}},
                {"eta", {0.013, -0.05}},
                {"lambda", {0.23, 0.07}},
                {"mu", {0.31, -0.05}},
                {"kappa", 2}},
               {"n = 1, Lambda = 2 kernel", "contour: period line plus circles around separated poles",
                "z_k + eta Lambda_k + a tau + b p above the contour, z_k - eta Lambda_k - a tau - b p below",
                "d^{-z/p}: principal logarithm"},
               {}};
    auto base = [](const Ctx& c) {
        return std::tuple{c.ps.modulus("tau"), c.ps.modulus("p"), c.ps.c("eta"), c.ps.c("lambda"), c.ps.c("mu")};
    };
    const std::vector<cplx> z1{0.0};
    const wm::HighestWeights w1({2});
    s.checks.push_back({"quadrature_doubling", 1e-9, [=](const Ctx& c) {
                            auto [tau, p, eta, lam, mu] = base(c);
                            return Outcome{hyp::doubling_residual(z1, lam, mu, tau, p, w1, eta), {}};
                        }});
    s.checks.push_back({"contour_shift", 1e-10, [=](const Ctx& c) {
                            auto [tau, p, eta, lam, mu] = base(c);
                            return Outcome{hyp::contour_shift_residual(z1, lam, mu, tau, p, w1, eta), {}};
                        }});
    s.checks.push_back({"sigma_translation", 1e-8, [=](const Ctx& c) {
                            auto [tau, p, eta, lam, mu] = base(c);
                            cplx sigma = tau - 2.0 * double(c.ps.i("kappa")) * eta;
                            return Outcome{hyp::sigma_translation_residual(mu, tau, sigma, eta), {}};
                        }});
    return s;
}

SuiteDef shap_suite() {
    SuiteDef s{"shapovalov-heat",
               {{"tau", {0.1, 0.9}},
                {"p", {-0.05, 0.7}},
                {"eta", {0.013, -0.05}},
                {"zs", {{0.12, 0.01}, {-0.17, 0.02}}},
                {"weights", {1, 1}},
                {"N", 5}},
               {"mu integrals along 2 eta R + eps, trapezoidal, truncated adaptively",
                "Q_k from the theta product: first vanishes at k = Lambda + 1, not k = Lambda",
                "sqrt(i eta): principal branch"},
               {}};
    s.checks.push_back({"shapovalov_symmetry", 1e-8, [](const Ctx& c) {
                            cplx tau = c.ps.modulus("tau"), eta = c.ps.c("eta");
                            double r = 0;
                            for (int L = 1; L <= 2; ++L)
                                for (int M = 1; M <= 2; ++M)
                                    r = std::max(r, shap::r_symmetry_residual(L, M, {0.27, 0.03}, {0.21, 0.04}, tau, eta));
                            return Outcome{r, {}};
                        }});
    s.checks.push_back({"epsilon_translation", 1e-10, [](const Ctx& c) {
                            cplx tau = c.ps.modulus("tau"), eta = c.ps.c("eta");
                            wm::HighestWeights w = c.ps.weights("weights");
                            size_t nB = wm::zero_weight_basis(w, false).size();
                            auto gen = rng_for(c, 41);
                            std::normal_distribution<double> N(0, 0.3);
                            std::vector<cplx> fa, ga;
                            for (size_t k = 0; k < nB; ++k) {
                                fa.push_back({N(gen), N(gen)});
                                ga.push_back({N(gen), N(gen)});
                            }
                            auto mk = [nB](std::vector<cplx> a) {
                                return ops::Fn([nB, a](cplx mu) {
                                    CMat m(Eigen::Index(nB), 1);
                                    for (size_t k = 0; k < nB; ++k) m(Eigen::Index(k), 0) = std::exp(a[k] * mu) * (1.0 + 0.2 * double(k) * mu);
                                    return m;
                                });
                            };
                            ops::Fn f = mk(fa), g = mk(ga);
                            shap::IntegrationPath path;
                            path.hs = c.q("hs", 0.3);
                            path.tmax = c.quad.contains("budget") ? shap::default_tmax(eta, c.q("budget", 45)) : 0.0;
                            cplx ref = shap::shapovalov_pair(f, g, tau, w, eta, path);
                            double r = 0;
                            for (double k : {1.0, -1.0, 2.0}) {
                                shap::IntegrationPath pk = path;
                                pk.offset = path.offset + 2.0 * eta * k;
                                r = std::max(r, rel_err(shap::shapovalov_pair(f, g, tau, w, eta, pk), ref));
                            }
                            return Outcome{r, {}};
                        }});
    s.checks.push_back({"heat_operator_single_point", 1e-10, [](const Ctx& c) {
                            cplx tau = c.ps.modulus("tau"), p = c.ps.modulus("p"), eta = c.ps.c("eta");
                            auto v = [](cplx m) { return std::exp(0.3 * m) * (1.0 + 0.2 * m); };
                            ops::Fn vf = [v](cplx m) {
                                CMat r(1, 1);
                                r(0, 0) = v(m);
                                return r;
                            };
                            shap::IntegrationPath path;
                            path.hs = c.q("hs", path.hs);
                            shap::HeatT T({0.0}, tau, p, wm::HighestWeights({2}), eta, vf, path, shap::heat_constant_n1(eta));
                            double r = 0;
                            for (cplx l : {cplx(0.23, 0.07), cplx(-0.11, 0.02), cplx(0.37, -0.04)})
                                r = std::max(r, rel_err(T(l)(0), shap::heat_T_explicit_n1(l, tau, p, eta, v, path)));
                            return Outcome{r, {}};
                        }});
    s.checks.push_back({"finite_operator_identities", 1e-8, [](const Ctx& c) {
                            cplx tau = c.ps.modulus("tau"), p = c.ps.modulus("p");
                            wm::HighestWeights w = c.ps.weights("weights");
                            auto zs = c.ps.cs("zs");
                            if (int(zs.size()) != w.n()) bad("parameters 'zs' and 'weights' differ in length");
                            if (!w.integral()) bad("parameter 'weights': integer weights are needed on the grid");
                            ops::Grid g;
                            g.N = c.ps.i("N");
                            double r = shap::tn_periodicity_residual(zs, tau, p, g, w);
                            for (int j = 0; j < w.n(); ++j) r = std::max(r, shap::finite_heat_intertwining_residual(j, zs, tau, p, g, w));
                            return Outcome{r, {}};
                        }});
    return s;
}

SuiteDef blocks_suite() {
    SuiteDef s{"blocks",
               {{"tau", {0.1, 0.9}}, {"eta", {0.004, -0.03}}, {"kappa", 5}},
               {"connection eta term: +eta'/eta", "T_{kappa,m} input modulus: tau - 2 kappa eta",
                "psi_g: c tau + d factor reading"},
               {}};
    s.checks.push_back({"dimension_formula", 0.0, [](const Ctx& c) {
                            cplx tau = c.ps.modulus("tau"), eta = c.ps.c("eta");
                            double r = 0;
                            std::vector<std::string> notes;
                            for (auto [k, m] : std::vector<std::pair<int, int>>{{4, 0}, {5, 1}, {6, 1}}) {
                                auto d = blk::dim_E_numeric(k, m, eta, tau, unsigned(c.seed + 10));
                                r = std::max(r, std::abs(double(d.nullity - blk::dim_E(k, m))));
                                notes.push_back("dim E(" + std::to_string(k) + "," + std::to_string(2 * m) +
                                                ") = " + std::to_string(d.nullity));
                            }
                            return Outcome{r, notes};
                        }});
    s.checks.push_back({"image_vanishing", 1e-6, [](const Ctx& c) {
                            cplx tau = c.ps.modulus("tau"), eta = c.ps.c("eta");
                            int kappa = c.ps.i("kappa");
                            if (kappa < 4) bad("parameter 'kappa': must be at least 4");
                            cplx sig = tau - 2.0 * eta * double(kappa);
                            auto d = blk::dim_E_numeric(kappa, 1, eta, sig, unsigned(c.seed + 10));
                            blk::Fn1 v = d.basis.at(0);
                            blk::HeatTKappaM T(kappa, 1, eta, tau, v);
                            return Outcome{blk::membership(kappa, 1, eta, tau, T.fn()).vanishing, {}};
                        }});
    s.checks.push_back({"theta_transformations", 1e-12, [](const Ctx& c) {
                            cplx tau = c.ps.modulus("tau");
                            auto g = rng_for(c, 51);
                            std::uniform_real_distribution<double> U(-0.5, 0.5);
                            double r = 0;
                            for (int k = 0; k < 20; ++k) {
                                cplx l{U(g), 0.5 * U(g)};
                                cplx v = ell::th(l, tau);
                                r = std::max({r, rel_err(ell::th(l + 2.0, tau), v),
                                              rel_err(ell::th(l + 2.0 * tau, tau), std::exp(-4.0 * pi * I1 * (l + tau)) * v),
                                              rel_err(ell::th(-l, tau), -v)});
                            }
                            return Outcome{r, {}};
                        }});
    return s;
}

SuiteDef semi_suite() {
    SuiteDef s{"semiclassical",
               {{"tau", {0.1, 0.9}}, {"kappa", 2}, {"lambda", {0.42, 0.01}}, {"etas", json::array()}},
               {"n = 1, Lambda = 2, p = -2 kappa eta"},
               {}};
    auto opts = [](const Ctx& c) {
        semi::SemiOptions o;
        o.tau = c.ps.modulus("tau");
        o.kappa = c.ps.i("kappa");
        if (o.kappa < 1) bad("parameter 'kappa': must be positive");
        if (!c.ps.j.at("etas").empty()) o.etas = c.ps.cs("etas");
        o.hs = c.q("hs", o.hs);
        o.budget = c.q("budget", o.budget);
        o.nline = int(c.q("nline", o.nline));
        o.ncirc = int(c.q("ncirc", o.ncirc));
        return o;
    };
    s.checks.push_back({"residue_split", 1e-8, [=](const Ctx& c) {
                            auto o = opts(c);
                            cplx lam = c.ps.c("lambda");
                            return Outcome{semi::residue_split_residual(lam, -lam, o.tau, o.kappa, o.resolved_etas().front()), {}};
                        }});
    s.checks.push_back({"omega_tilde_normalization", 1e-3, [=](const Ctx& c) {
                            auto o = opts(c);
                            auto etas = o.resolved_etas();
                            std::vector<double> dev;
                            for (cplx e : etas) dev.push_back(std::abs(semi::omega_tilde(e, o.tau, o.kappa) - 1.0));
                            bool mono = true;
                            for (size_t k = 1; k < dev.size(); ++k) mono = mono && dev[k] < dev[k - 1];
                            std::vector<std::string> notes{std::string("deviation decreasing along the eta sequence: ") +
                                                           (mono ? "yes" : "no")};
                            return Outcome{mono ? dev.back() : *std::max_element(dev.begin(), dev.end()), notes};
                        }});
    return s;
}

const std::vector<SuiteDef>& registry() {
    static const std::vector<SuiteDef> r{gauss_suite(),   elliptic_suite(),  weights_suite(),
                                         rmatrix_suite(), ops_suite(),       hyper_suite(),
                                         shap_suite(),    blocks_suite(),    semi_suite()};
    return r;
}

const SuiteDef& find_suite(const std::string& name) {
    for (const auto& s : registry())
        if (s.name == name) return s;
    throw Error(Errc::unknown_suite, "unknown suite '" + name + "'");
}

}  // namespace

const char* build_timestamp() { return QKZB_BUILD_TIME; }

int exit_code_for(Errc e) {
    switch (e) {
    case Errc::invalid_config:
    case Errc::unknown_suite:
    case Errc::domain: return 2;
    default: return 1;
    }
}

cplx parse_complex(const std::string& s0) {
    std::string s;
    for (char ch : s0)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    static const std::regex num(R"([+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)");
    static const std::regex full(R"(([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(?:([+-](?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)i)?)");
    static const std::regex imag_only(R"(([+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)i)");
    std::smatch m;
    auto val = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return std::stod(t);
    };
    if (std::regex_match(s, m, num)) return {std::stod(s), 0.0};
    if (std::regex_match(s, m, imag_only)) return {0.0, val(m[1].str())};
    if (!s.empty() && std::regex_match(s, m, full) && m[1].matched) return {std::stod(m[1].str()), m[2].matched ? val(m[2].str()) : 0.0};
    throw Error(Errc::invalid_config, "cannot parse complex number '" + s0 + "'");
}

std::string format_complex(cplx z) {
    auto clean = [](double x) { return x == 0.0 ? 0.0 : x; };
    char b[96];
    std::snprintf(b, sizeof b, "%.15g%+.15gi", clean(z.real()), clean(z.imag()));
    return b;
}

SuiteConfig parse_config(const json& j) {
    if (!j.is_object()) bad("config must be a JSON object");
    static const std::set<std::string> keys{"suite", "parameters", "tolerances", "quadrature", "seed"};
    SuiteConfig c;
    for (const auto& [k, v] : j.items()) {
        if (!keys.count(k)) bad("unknown config key '" + k + "'");
        if (k == "suite") {
            if (!v.is_string()) bad("'suite' must be a string");
            c.suite = v.get<std::string>();
        } else if (k == "parameters") {
            if (!v.is_object()) bad("'parameters' must be an object");
            c.parameters = v;
        } else if (k == "tolerances") {
            if (!v.is_object()) bad("'tolerances' must be an object");
            for (const auto& [n, t] : v.items()) {
                if (!t.is_number() || t.get<double>() < 0) bad("tolerance '" + n + "' must be a nonnegative number");
                c.tolerances[n] = t.get<double>();
            }
        } else if (k == "quadrature") {
            static const std::set<std::string> qk{"nline", "ncirc", "hs", "budget"};
            if (!v.is_object()) bad("'quadrature' must be an object");
            for (const auto& [n, t] : v.items()) {
                if (!qk.count(n)) bad("unknown quadrature key '" + n + "'");
                if (!t.is_number() || !(t.get<double>() > 0)) bad("quadrature '" + n + "' must be a positive number");
            }
            c.quadrature = v;
        } else {
            if (!v.is_number_integer() || v.get<long long>() < 0) bad("'seed' must be a nonnegative integer");
            c.seed = v.get<unsigned long>();
        }
    }
    return c;
}

bool Report::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

json to_json(const Report& r) {
    json j;
    j["schema"] = 1;
    j["suite"] = r.suite;
    j["timestamp"] = r.timestamp;
    j["parameters"] = r.parameters;
    j["seed"] = r.seed;
    j["checks"] = json::array();
    for (const auto& c : r.checks)
        j["checks"].push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    j["status"] = r.pass() ? "pass" : "fail";
    j["notes"] = r.notes;
    return j;
}

std::string dump(const Report& r) { return to_json(r).dump(2) + "\n"; }

std::vector<std::string> suite_names() {
    std::vector<std::string> out;
    for (const auto& s : registry()) out.push_back(s.name);
    return out;
}

std::vector<std::string> check_names(const std::string& suite) {
    std::vector<std::string> out;
    for (const auto& c : find_suite(suite).checks) out.push_back(c.name);
    return out;
}

Report run_suite(const SuiteConfig& cfg) {
    const SuiteDef& s = find_suite(cfg.suite);
    if (!(cfg.tolerance_scale > 0)) bad("tolerance scale must be positive");
    json ps = s.defaults;
    for (const auto& [k, v] : cfg.parameters.items()) {
        if (!ps.contains(k)) bad("unknown parameter '" + k + "' for suite " + s.name);
        ps[k] = v;
    }
    for (const auto& [k, v] : cfg.tolerances) {
        (void)v;
        if (std::none_of(s.checks.begin(), s.checks.end(), [&](const CheckDef& c) { return c.name == k; }))
            bad("unknown check '" + k + "' in tolerances");
    }
    Ctx ctx{Params{ps}, cfg.quadrature, cfg.seed};

    std::vector<Outcome> out(s.checks.size());
    std::vector<std::string> errors(s.checks.size());
    parallel_for(s.checks.size(), [&](size_t i) {
        try {
            out[i] = s.checks[i].run(ctx);
        } catch (const Error& e) {
            if (e.code() == Errc::invalid_config) throw;
            out[i].residual = INFINITY;
            errors[i] = std::string(errc_name(e.code())) + ": " + e.what();
        }
    });

    Report r;
    r.suite = s.name;
    r.timestamp = build_timestamp();
    r.parameters = {{"values", ps}, {"quadrature", cfg.quadrature}, {"tolerance_scale", cfg.tolerance_scale}};
    r.seed = cfg.seed;
    r.notes = s.notes;
    for (size_t i = 0; i < s.checks.size(); ++i) {
        const auto& d = s.checks[i];
        CheckResult c;
        c.name = d.name;
        c.residual = out[i].residual;
        auto it = cfg.tolerances.find(d.name);
        c.tolerance = (it == cfg.tolerances.end() ? d.tolerance : it->second) * cfg.tolerance_scale;
        c.pass = std::isfinite(c.residual) && c.residual <= c.tolerance;
        r.checks.push_back(c);
        for (const auto& n : out[i].notes) r.notes.push_back(d.name + ": " + n);
        if (!errors[i].empty()) r.notes.push_back(d.name + ": " + errors[i]);
    }
    return r;
}

namespace {

struct TargetDef {
    std::string name;
    std::vector<std::string> required;
    json defaults;
    std::function<cplx(const Params&)> run;
};

const std::vector<TargetDef>& targets() {
    static const json tau_d = {0.1, 0.9}, p_d = {-0.05, 0.7}, eta_d = {0.013, -0.05};
    static const std::vector<TargetDef> t{
        {"theta", {"t"}, {{"tau", tau_d}, {"deriv", 0}},
         [](const Params& p) {
             int d = p.i("deriv");
             if (d < 0 || d > 3) bad("argument 'deriv': 0..3");
             return ell::theta_series<double>(p.c("t"), p.modulus("tau"), d, ell::default_truncation());
         }},
        {"omega", {"a"}, {{"z", 0.13}, {"tau", tau_d}, {"p", p_d}},
         [](const Params& p) { return ell::Omega(p.c("a"), p.c("z"), p.modulus("tau"), p.modulus("p")); }},
        {"u", {"lambda", "mu"}, {{"zs", {0.0}}, {"weights", {2}}, {"tau", tau_d}, {"p", p_d}, {"eta", eta_d}, {"row", 0}, {"col", 0}},
         [](const Params& p) {
             auto w = p.weights("weights");
             auto zs = p.cs("zs");
             if (int(zs.size()) != w.n()) bad("arguments 'zs' and 'weights' differ in length");
             CMat u = hyp::universal_u(zs, p.c("lambda"), p.c("mu"), p.modulus("tau"), p.modulus("p"), w, p.c("eta"));
             int r = p.i("row"), c = p.i("col");
             if (r < 0 || c < 0 || r >= u.rows() || c >= u.cols()) bad("arguments 'row'/'col' out of range");
             return u(r, c);
         }},
        {"Q", {"mu"}, {{"k", 1}, {"Lambda", 2}, {"tau", tau_d}, {"eta", eta_d}},
         [](const Params& p) {
             int k = p.i("k");
             if (k < 0) bad("argument 'k': must be nonnegative");
             return shap::q_single(k, p.r("Lambda"), p.c("mu"), p.modulus("tau"), p.c("eta"));
         }},
        {"V", {"lambda", "mu"}, {{"tau", tau_d}, {"sigma", {0.06, 1.2}}, {"eta", {0.004, -0.03}}},
         [](const Params& p) {
             blk::VKernel V(p.modulus("tau"), p.modulus("sigma"), p.c("eta"));
             return V(p.c("lambda"), p.c("mu"));
         }},
        {"M", {"lambda", "mu"}, {{"m", 1}, {"tau", tau_d}, {"p", {0.06, 1.2}}, {"eta", {0.004, -0.03}}},
         [](const Params& p) {
             blk::MKernel M(p.i("m"), p.modulus("tau"), p.modulus("p"), p.c("eta"));
             return M(p.c("lambda"), p.c("mu"));
         }},
        {"theta_level", {"j", "kappa", "lambda"}, {{"tau", tau_d}},
         [](const Params& p) { return ell::theta_level<double>(p.i("j"), p.i("kappa"), p.c("lambda"), p.modulus("tau")); }},
        {"gauss", {"N"}, json::object(),
         [](const Params& p) {
             int N = p.i("N");
             if (N < 1) bad("argument 'N': must be positive");
             return shap::gauss_sum(N);
         }},
    };
    return t;
}

}  // namespace

std::vector<std::string> eval_targets() {
    std::vector<std::string> out;
    for (const auto& t : targets()) out.push_back(t.name);
    return out;
}

cplx eval_value(const std::string& target, const json& args) {
    for (const auto& t : targets()) {
        if (t.name != target) continue;
        json ps = t.defaults;
        for (const auto& [k, v] : args.items()) {
            bool known = ps.contains(k) || std::find(t.required.begin(), t.required.end(), k) != t.required.end();
            if (!known) bad("unknown argument '" + k + "' for target " + target);
            ps[k] = v;
        }
        for (const auto& k : t.required)
            if (!ps.contains(k)) bad("missing argument '" + k + "' for target " + target);
        return t.run(Params{ps});
    }
    bad("unknown eval target '" + target + "'");
}

}  // namespace qkzb::harness
