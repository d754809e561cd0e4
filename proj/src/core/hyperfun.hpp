#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "qkzb_ops.hpp"
#include "weights.hpp"

namespace qkzb::hyp {

struct Circle {
    cplx center;
    double radius = 0;
    int orientation = 1;  // +1 counterclockwise, -1 clockwise
};

// A horizontal period segment Im t = height, Re t in [x0, x0+1), closed by 1-periodicity,
// plus small circles around the poles that must be separated from the line.
struct Contour {
    double height = 0;
    double x0 = -0.5;
    int nline = 96;
    int ncirc = 48;
    std::vector<Circle> circles;
    std::string tag;
    std::vector<cplx> nodes;
    std::vector<cplx> weights;
    void realize();
};

struct ContourOptions {
    int nline = 96;
    int ncirc = 48;
    double radius_factor = 0.45;
    double shift_frac = 0.0;  // move the line inside its gap, fraction of half the gap
    std::optional<double> height;
};

// upper points must lie above the contour, lower points below
Contour build_contour(const std::vector<cplx>& upper, const std::vector<cplx>& lower, const ContourOptions& o = {});

struct PoleFamilies {
    std::vector<cplx> upper;
    std::vector<cplx> lower;
};
PoleFamilies families(const std::vector<cplx>& zs, const std::vector<double>& Ls, cplx eta, cplx tau, cplx p,
                      int amax = 4);

nlohmann::json contour_to_json(const Contour& c);
Contour contour_from_json(const nlohmann::json& j);

// general weight function: sum over disjoint subset assignments
cplx weight_fn(const wm::BasisIndex& I, const std::vector<cplx>& t, const std::vector<cplx>& zs, cplx lambda, cplx tau,
               const std::vector<double>& Ls, cplx eta);
cplx mirror_weight_fn(const wm::BasisIndex& J, const std::vector<cplx>& t, const std::vector<cplx>& zs, cplx mu, cplx p,
                      const std::vector<double>& Ls, cplx eta);

// universal hypergeometric function for m = 1 with the contour above
class UKernel {
public:
    UKernel(std::vector<cplx> zs, cplx tau, cplx p, wm::HighestWeights w, cplx eta, const ContourOptions& o = {});

    const Contour& contour() const { return contour_; }
    const std::vector<wm::BasisIndex>& basis() const { return basis_; }
    cplx tau() const { return tau_; }
    cplx p() const { return p_; }
    cplx eta() const { return eta_; }

    // nB x nodes: quadrature weight * Omega product * omega_I(t, lambda)
    CMat left(cplx lambda) const;
    // nodes x nB: mirror weights at mu
    CMat right(cplx mu) const;
    CMat eval(cplx lambda, cplx mu) const;
    CMat eval(const CMat& left, cplx lambda, const CMat& right, cplx mu) const;

private:
    std::vector<cplx> zs_;
    cplx tau_, p_, eta_;
    wm::HighestWeights w_;
    std::vector<wm::BasisIndex> basis_;
    Contour contour_;
    CMat pre_;       // nB x nodes, lambda-independent part of left()
    CMat pre_vee_;   // nodes x nB
    std::vector<cplx> shift_, shift_vee_;
};

CMat universal_u(const std::vector<cplx>& zs, cplx lambda, cplx mu, cplx tau, cplx p, const wm::HighestWeights& w,
                 cplx eta, const ContourOptions& o = {});

// torus quadrature in the convergent region; weights are not constrained to sum to 2m
CMat universal_u_torus(const std::vector<cplx>& zs, cplx lambda, cplx mu, cplx tau, cplx p,
                       const std::vector<double>& Ls, int m, cplx eta, int npts = 96);
bool in_convergent_region(const std::vector<double>& Ls, cplx eta, cplx tau, cplx p);

enum class Shift { p_shift, tau_shift, unit };
double qkzb_system_residual(Shift which, int j, const std::vector<cplx>& zs, cplx lambda, cplx mu, cplx tau, cplx p,
                            const wm::HighestWeights& w, cplx eta, const ContourOptions& o = {});

// v(z, lambda) = prod_i d_{i,I}(mu)^{-z_i/p} u^I, principal branch
CVec true_solution(const wm::BasisIndex& I, cplx mu, const std::vector<cplx>& zs, cplx lambda, cplx tau, cplx p,
                   const wm::HighestWeights& w, cplx eta, const ContourOptions& o = {});
double multiplier_z_residual(const wm::BasisIndex& I, int i, cplx mu, const std::vector<cplx>& zs, cplx lambda,
                             cplx tau, cplx p, const wm::HighestWeights& w, cplx eta);
double multiplier_lambda_residual(const wm::BasisIndex& I, cplx mu, const std::vector<cplx>& zs, cplx lambda, cplx tau,
                                  cplx p, const wm::HighestWeights& w, cplx eta);

double doubling_residual(const std::vector<cplx>& zs, cplx lambda, cplx mu, cplx tau, cplx p,
                         const wm::HighestWeights& w, cplx eta);
double contour_shift_residual(const std::vector<cplx>& zs, cplx lambda, cplx mu, cplx tau, cplx p,
                              const wm::HighestWeights& w, cplx eta);
// compares the integral before and after t -> t - sigma (n = 1, Lambda = 2 kernel)
double sigma_translation_residual(cplx mu, cplx tau, cplx sigma, cplx eta);

}  // namespace qkzb::hyp
