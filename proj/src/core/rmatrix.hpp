#pragma once

#include <array>
#include <string>
#include <vector>

#include "common.hpp"

namespace qkzb::rmat {

// fundamental dynamical R-matrix on C^2 (x) C^2, basis index a*2+b, e_1 has weight -1
CMat r11(cplx z, cplx lambda, cplx tau, cplx eta);

// elliptic factorial prod_{j=1}^{a} theta(2 eta j)/theta(2 eta)
cplx elliptic_factorial(int a, cplx tau, cplx eta);

// R_{L1,L2} on L_{L1} (x) L_{L2} in the basis ebar_a (x) ebar_b, index a*(L2+1)+b.
// leak receives the distance of the fused product from the symmetric subspace.
CMat r_fused(int L1, int L2, cplx z, cplx lambda, cplx tau, cplx eta, double* leak = nullptr);

// R_{ij}(z, lambda - 2 eta sum_{l in spect} h^(l)) acting on L_{dims[0]} (x) ... (mixed-radix lexicographic basis)
CMat embed_R(const std::vector<int>& dims, int i, int j, cplx z, cplx lambda, const std::vector<int>& spect, cplx tau,
             cplx eta);

double unitarity_residual(int L1, int L2, cplx z, cplx lambda, cplx tau, cplx eta);

double dybe_residual(const std::array<int, 3>& weights, const std::array<cplx, 3>& zs, cplx lambda, cplx tau, cplx eta);

enum class TauShiftReading { product, sum, none };
const char* reading_name(TauShiftReading r);

double tau_shift_residual(int L, int M, cplx z, cplx lambda, cplx tau, cplx eta,
                        TauShiftReading reading = TauShiftReading::product);

// max |R(eta+) - R(eta-)| / max |R| with 2 eta = 1/N +- delta
double regularity_probe(int L1, int L2, int N, cplx z, cplx lambda, cplx tau, double delta = 1e-6);

// max |[R, h(x)1 + 1(x)h]|
double weight_commutator_residual(int L1, int L2, cplx z, cplx lambda, cplx tau, cplx eta);

}  // namespace qkzb::rmat
