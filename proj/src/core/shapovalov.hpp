#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "common.hpp"
#include "hyperfun.hpp"
#include "qkzb_ops.hpp"
#include "weights.hpp"

namespace qkzb::shap {

inline constexpr cplx default_eps{0.2357, 0.0113};

cplx q_single(int k, double Lambda, cplx mu, cplx tau, cplx eta);
cplx q_index(const wm::BasisIndex& J, cplx mu, cplx tau, const wm::HighestWeights& w, cplx eta);
// diagonal of Q(mu, tau) over the basis
CVec q_tensor(cplx mu, cplx tau, const wm::HighestWeights& w, cplx eta, const std::vector<wm::BasisIndex>& basis);

// mu = 2 eta s + offset, s in [-tmax, tmax] with step hs
struct IntegrationPath {
    cplx offset = default_eps;
    double hs = 0.25;
    double tmax = 0;  // 0 selects pi |Im eta| T^2 = 45
    bool adaptive = true;
};

double default_tmax(cplx eta, double budget = 45.0);
std::vector<cplx> path_nodes(cplx eta, const IntegrationPath& path, double tmax);

// integral of f along the path; widens tmax until the endpoint terms are negligible
cplx integrate_path(cplx eta, const IntegrationPath& path, const std::function<cplx(cplx)>& f);

// Q_tau(f, g) = sum_J int Q_J(mu, tau) f_J(mu) g_J(-mu) alpha(mu) dmu
cplx shapovalov_pair(const ops::Fn& f, const ops::Fn& g, cplx tau, const wm::HighestWeights& w, cplx eta,
                     const IntegrationPath& path = {});

// T(z, tau, p): lambda -> alpha(lambda) sum_J int u_{IJ}(lambda, mu; tau, tau+p) Q_J(mu, tau+p) v_J(-mu) alpha(mu) dmu
class HeatT {
public:
    HeatT(std::vector<cplx> zs, cplx tau, cplx p, wm::HighestWeights w, cplx eta, ops::Fn v,
          const IntegrationPath& path = {}, cplx norm = 1.0);
    CVec operator()(cplx lambda) const;
    ops::Fn fn() const;
    double tmax() const { return tmax_; }

private:
    void assemble(double tmax);
    std::shared_ptr<hyp::UKernel> uk_;
    wm::HighestWeights w_;
    cplx eta_, sigma_, norm_;
    ops::Fn v_;
    IntegrationPath path_;
    double tmax_ = 0;
    std::vector<cplx> mus_;
    CMat rw_;  // contour nodes x mu-nodes
};

// T^vee(z, p, tau): nu -> alpha(nu) sum_J int Q_J(mu, tau+p) v_J(mu) u_{JK}(-mu, nu; tau+p, p) alpha(mu) dmu
class HeatTVee {
public:
    HeatTVee(std::vector<cplx> zs, cplx p, cplx tau, wm::HighestWeights w, cplx eta, ops::Fn v,
             const IntegrationPath& path = {});
    CVec operator()(cplx nu) const;
    ops::Fn fn() const;

private:
    std::shared_ptr<hyp::UKernel> uk_;
    wm::HighestWeights w_;
    cplx eta_, sigma_;
    ops::Fn v_;
    IntegrationPath path_;
    std::vector<cplx> mus_;
    CMat s_;  // mu-nodes x contour nodes
};

// direct single-integral form of the n = 1, Lambda = 2 heat operator with constant -1/(4 pi sqrt(i eta))
cplx heat_T_explicit_n1(cplx lambda, cplx tau, cplx p, cplx eta, const std::function<cplx(cplx)>& v,
                        const IntegrationPath& path = {});
cplx heat_constant_n1(cplx eta);

double heat_intertwining_residual(int j, const std::vector<cplx>& zs, cplx tau, cplx p, const wm::HighestWeights& w, cplx eta,
                         unsigned seed, const IntegrationPath& path = {});
double heat_vee_intertwining_residual(int j, const std::vector<cplx>& zs, cplx tau, cplx p, const wm::HighestWeights& w,
                             cplx eta, unsigned seed, const IntegrationPath& path = {});
double r_symmetry_residual(int L, int M, cplx z, cplx mu, cplx tau, cplx eta);
// first or second Shapovalov adjointness identity for K_j and K^vee_j, relative
double adjointness_residual(int j, bool second, const std::vector<cplx>& zs, cplx tau, cplx p, const wm::HighestWeights& w,
                        cplx eta, unsigned seed);

CMat compose_U(const std::vector<cplx>& zs, cplx lambda, cplx nu, cplx tau, cplx p, const wm::HighestWeights& w,
               cplx eta, const IntegrationPath& path = {});

struct CompositionReport {
    cplx expected;        // -e^{4 pi i eta}/(2 pi sqrt(4 i eta))
    cplx measured;        // mean of U/u
    double spread = 0;    // max relative deviation of U/u from its mean
    double rel_to_expected = 0;
    double rel_to_inverse = 0;  // relative distance of U/u from 1/expected
};
CompositionReport composition_constant(const std::vector<cplx>& zs, cplx tau, cplx p, const wm::HighestWeights& w, cplx eta,
                                  const std::vector<std::pair<cplx, cplx>>& draws);

cplx gauss_sum(int N);

// finite operator on F_N(eps) at eta = 1/2N
CMat heat_TN(const std::vector<cplx>& zs, cplx tau, cplx p, const ops::Grid& g, const wm::HighestWeights& w);
double finite_heat_intertwining_residual(int j, const std::vector<cplx>& zs, cplx tau, cplx p, const ops::Grid& g,
                         const wm::HighestWeights& w);
// rows of T_N at lambda + 2 against lambda
double tn_periodicity_residual(const std::vector<cplx>& zs, cplx tau, cplx p, const ops::Grid& g,
                               const wm::HighestWeights& w);

struct RationalReport {
    cplx CN;
    cplx measured;  // mean of u / U_N
    double residual_literal = 0;  // max |u - C_N U_N| / |u|
    double residual_measured = 0;
};
RationalReport rational_constant(int N, cplx tau, cplx p, cplx eps = default_eps);
// relative variation of u at 2 eta = 1/N +- delta
double regular_eta_variation(int N, cplx lambda, cplx nu, cplx tau, cplx p, double delta = 1e-6);

}  // namespace qkzb::shap
