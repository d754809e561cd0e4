#pragma once

#include <functional>
#include <vector>

#include "common.hpp"
#include "weights.hpp"

namespace qkzb::ops {

struct QkzbConfig {
    std::vector<cplx> zs;
    cplx tau;
    cplx p;
    cplx eta;
    wm::HighestWeights weights;
};

// lambda -> matrix whose rows run over the zero-weight basis
using Fn = std::function<CMat(cplx)>;

struct Factor {
    bool gamma = false;
    int j = 0;
    int k = 0;
    cplx z = 0.0;
    std::vector<int> spect;  // slots whose weights shift lambda
};

struct OpPlan {
    std::vector<Factor> factors;  // product in list order, rightmost factor acts first
    cplx modulus;
    cplx eta;
    wm::HighestWeights weights;
    std::vector<wm::BasisIndex> basis;
};

// K_j(z, modulus, shift): left factors carry z_j - z_k + shift
OpPlan K_op(int j, const std::vector<cplx>& zs, cplx modulus, cplx shift, const wm::HighestWeights& w, cplx eta);
// mirror operator K^vee_j(z, modulus, shift)
OpPlan Kvee_op(int j, const std::vector<cplx>& zs, cplx modulus, cplx shift, const wm::HighestWeights& w, cplx eta);

// R_{j,k}(z, lambda - 2 eta sum_{spect} h) on the zero-weight basis
CMat factor_matrix(const OpPlan& op, const Factor& f, cplx lambda);

Fn gamma_shift(int j, const wm::HighestWeights& w, const std::vector<wm::BasisIndex>& basis, cplx eta, Fn f);
Fn apply(const OpPlan& op, Fn f);
Fn apply_K(int j, const QkzbConfig& c, Fn f);
Fn apply_K_vee(int j, const QkzbConfig& c, Fn f);

enum class DKind { D, D_vee };
// diagonal entries of D_j(mu) or D^vee_j(mu) over the basis
CVec d_multiplier(int j, cplx mu, DKind which, const wm::HighestWeights& w, const std::vector<wm::BasisIndex>& basis,
                  cplx eta);

struct Grid {
    int N = 5;
    cplx eps{0.2357, 0.0113};
    int size() const { return 2 * N; }
    cplx node(int k) const { return eps + double(k) / N; }
    // index of lambda in eps + Z/N modulo 2N; throws grid_mismatch when off-grid
    int index(cplx lambda) const;
};

// dense matrix of the operator on F_N(eps): block (k, k') of size |basis|, 2-periodic
CMat grid_matrix(const OpPlan& op, const Grid& g);
CMat grid_factor(const OpPlan& op, const Factor& f, const Grid& g);

double compatibility_residual(bool vee, int j, int l, const std::vector<cplx>& zs, cplx tau, cplx p, const wm::HighestWeights& w,
                    cplx eta, const Grid& g);
double mirror_residual(int i, const std::vector<cplx>& zs, cplx tau, cplx p, const wm::HighestWeights& w, cplx eta,
                       const Grid& g);
double inverse_residual(int j, const QkzbConfig& c, const Grid& g);
double linearity_residual(int j, const QkzbConfig& c, const Grid& g, unsigned seed);
// largest entry magnitude over all K_j and K^vee_j grid matrices; infinite when a pole is hit
double grid_max_entry(const QkzbConfig& c, const Grid& g);

// alpha/D conjugation of K_j (first) or K^vee_j (second), relative residual
double alpha_conjugation_residual(int j, const QkzbConfig& c, bool vee, unsigned seed);

}  // namespace qkzb::ops
