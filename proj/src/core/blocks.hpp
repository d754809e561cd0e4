#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "common.hpp"
#include "hyperfun.hpp"

namespace qkzb::blk {

using Fn1 = std::function<cplx(cplx)>;
using Fn2 = std::function<cplx(cplx, cplx)>;  // (lambda, tau)

int dim_E(int kappa, int m);

struct DimReport {
    int candidates = 0;
    int nullity = 0;
    std::vector<double> singular_values;
    std::vector<Fn1> basis;  // spanning elements of E_{kappa,2m,eta}(tau)
};
// null space of the reflection condition on prod theta(lambda - 2 eta j) theta_{j,k'}
DimReport dim_E_numeric(int kappa, int m, cplx eta, cplx tau, unsigned seed = 11);

struct MembershipReport {
    double quasi_periodicity = 0;
    double reflection = 0;
    double vanishing = 0;
    double max() const { return std::max({quasi_periodicity, reflection, vanishing}); }
};
MembershipReport membership(int kappa, int m, cplx eta, cplx tau, const Fn1& f);
double membership_residual(int kappa, int m, cplx eta, cplx tau, const Fn1& f);
// even functions of level k: quasi-periodicity and evenness
double theta_space_residual(int k, cplx tau, const Fn1& f);

// +eta'/eta makes eta^{-1}(theta_{j+1} - theta_{-j-1}) horizontal; literal is the printed sign
enum class EtaTerm { plus, literal };
struct NablaResult {
    cplx value;
    double disagreement = 0;  // |D(h) - D(2h)| relative to the scale of v
    bool unstable = false;
};
NablaResult kzb_connection(int kappa, int m, const Fn2& v, cplx lambda, cplx tau, EtaTerm sign = EtaTerm::plus,
                           double h = 1e-3, double tol = 1e-7);
Fn2 horizontal_section(int j, int kappa);

// i/sqrt(4 i eta) int_{2 eta R} e^{-pi i (lambda+mu)^2 / 4 eta} v(-mu) dmu
Fn1 heat_T_kappa0(int kappa, cplx eta, cplx tau, Fn1 v, bool normalized = true);
double theta_identity_residual(int j, int kappa, cplx eta, cplx tau, cplx lambda);

// shifted: p = -2 eta kappa, the modulus of the input is tau - 2 eta kappa; literal: p = tau - 2 eta kappa
enum class PConvention { shifted, literal };
cplx input_modulus(int kappa, cplx eta, cplx tau, PConvention pc);

// phi_m^{-1} T(z = 0, tau, p) phi_m, integrated along mu = -lambda + 2 eta s + c0
class HeatTKappaM {
public:
    HeatTKappaM(int kappa, int m, cplx eta, cplx tau, Fn1 v, PConvention pc = PConvention::shifted, double hs = 0.1);
    cplx operator()(cplx lambda) const;
    cplx sigma() const { return sigma_; }
    Fn1 fn() const;

private:
    int kappa_, m_;
    cplx eta_, tau_, sigma_;
    Fn1 v_;
    double hs_;
    std::shared_ptr<hyp::UKernel> uk_;
};

// V kernel with constant c
class VKernel {
public:
    VKernel(cplx tau, cplx sigma, cplx eta, const hyp::ContourOptions& o = {}, cplx c = 1.0);
    cplx operator()(cplx lambda, cplx mu) const;

private:
    cplx tau_, sigma_, eta_, c_;
    std::vector<cplx> nodes_, base_;
};

cplx residue(const Fn1& f, cplx center, double r = 1e-3, int n = 32);
// V(2 eta + r + s tau) against theta'(0)/theta(4 eta) e^{2 pi i s sigma} res_{-2 eta + r + s tau} V
double v_residue_residual(int r, int s, cplx mu, cplx tau, cplx sigma, cplx eta);
// T_{kappa,1} against the V assembly with c = -theta'(0,sigma) theta(4 eta, sigma)
double v_heat_assembly_residual(int kappa, cplx eta, cplx tau, const Fn1& v, const std::vector<cplx>& lambdas);

class MKernel {
public:
    MKernel(int m, cplx tau, cplx p, cplx eta, int nline = 0, int ncirc = 0);
    cplx operator()(cplx lambda, cplx mu) const;
    // int M(lambda, mu) phi(-mu) dmu along the saddle path
    cplx apply(const Fn1& phi, cplx lambda, double hs = 0.25) const;
    size_t nodes() const { return t1_.size(); }

private:
    std::vector<cplx> left(cplx lambda) const;
    cplx eval(const std::vector<cplx>& A, cplx lambda, cplx mu) const;
    int m_;
    cplx tau_, p_, eta_;
    std::vector<cplx> t1_, t2_, base_;
};

// max |M phi(lambda) theta(lambda) + T_{kappa,0}(theta phi)(lambda)| relative, m = 0
double kernel_m0_residual(int kappa, cplx eta, cplx tau, const std::vector<cplx>& lambdas);
// spread of M / (alpha alpha V theta(mu) theta(mu + 2 eta) / (theta(lambda - 2 eta) theta(lambda))), m = 1
double kernel_m1_ratio_spread(int kappa, cplx eta, cplx tau, const std::vector<std::pair<cplx, cplx>>& pts);

struct ModularElement {
    long a = 1, b = 0, c = 0, d = 1;
    ModularElement() = default;
    ModularElement(long a, long b, long c, long d);
    ModularElement operator*(const ModularElement& o) const;
    cplx act(cplx tau) const;
};

enum class PsiReading { ctau, clambda };
Fn1 cocycle_psi(const ModularElement& g, int kappa, cplx tau, Fn1 v, PsiReading r = PsiReading::ctau);
double cocycle_residual(const ModularElement& g, const ModularElement& h, int kappa, cplx tau, PsiReading r);
// distance between psi_g and the operator implied by the section transformation rule (with kappa -> -kappa)
double section_rule_residual(const ModularElement& g, int kappa, cplx tau, PsiReading r);

}  // namespace qkzb::blk
