#pragma once

#include <functional>
#include <vector>

#include <json.hpp>

#include "common.hpp"

namespace qkzb::semi {

using Fn2 = std::function<cplx(cplx, cplx)>;  // (lambda, tau)

// v_0 = theta(lambda, tau) w(lambda, tau)
cplx default_w(cplx lambda, cplx tau);

struct SemiOptions {
    cplx tau{0.1, 0.9};
    int kappa = 2;
    std::vector<cplx> lambdas{{0.42, 0.01}, {0.47, 0.0}, {0.53, -0.02}, {0.58, 0.02}};
    std::vector<cplx> etas;  // empty selects -0.04i 2^{-k}, k = 1..5
    double hs = 0.4;
    double budget = 60.0;  // pi |eta| T^2
    int nline = 128;
    int ncirc = 64;
    double h_lambda = 1e-3;
    cplx dtau{0.0, 1e-4};
    std::vector<cplx> resolved_etas() const;
};

// right-hand side of the n = 1, Lambda = 2 heat equation with p = -2 kappa eta
cplx qkzb1_rhs(cplx lambda, cplx eta, const SemiOptions& o, const Fn2& w);

// 2 pi i kappa dv/dtau - (d^2/dlambda^2 - 2 wp) v
cplx kzb_heat_apply(int kappa, const Fn2& v, cplx lambda, cplx tau, double h = 1e-3, cplx dtau = {0.0, 1e-4});

struct ExpansionPoint {
    cplx lambda;
    cplx g0, g1;
    double g0_error = 0;
    cplx c;
    double slope = 0;
};

struct ExpansionReport {
    std::vector<cplx> etas;
    std::vector<ExpansionPoint> points;
    double g0_max_error = 0;
    cplx c_mean;
    double c_spread = 0;
    double slope_min = 0, slope_max = 0;
    // i pi c against 2 pi i kappa eta'/eta, reported side by side
    cplx c_heat;
    cplx eta_term;
    double residue_split = 0;
    std::vector<double> omega_tilde_dev;
};

ExpansionReport semiclassical_residual(const SemiOptions& o = {}, const Fn2& w = default_w);
nlohmann::json to_json(const ExpansionReport& r);

// slope of log |I_eta - two-term expansion| against log |eta| for a pure test function
double gaussian_asymptotic_slope(cplx lambda, const std::vector<cplx>& etas, double* max_rel_first = nullptr);

// full t-integral against 2 pi i res_{t = 2 eta} + integral over the cycle without the 2 eta detour
double residue_split_residual(cplx lambda, cplx mu, cplx tau, int kappa, cplx eta);
// Omega-tilde_{2 eta}(2 eta, tau, tau - 2 kappa eta)
cplx omega_tilde(cplx eta, cplx tau, int kappa);

}  // namespace qkzb::semi
