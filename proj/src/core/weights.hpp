#pragma once

#include <map>
#include <vector>

#include "common.hpp"

namespace qkzb::wm {

using BasisIndex = std::vector<int>;

class HighestWeights {
public:
    explicit HighestWeights(std::vector<double> lambdas);

    const std::vector<double>& lambdas() const { return lambdas_; }
    int n() const { return static_cast<int>(lambdas_.size()); }
    int m() const { return m_; }
    double operator[](int i) const { return lambdas_[static_cast<size_t>(i)]; }
    bool integral() const;
    HighestWeights reversed() const;

private:
    std::vector<double> lambdas_;
    int m_ = 0;
};

double weight_of(int k, double Lambda);

// weight of slot j in basis vector I
inline double slot_weight(const BasisIndex& I, const HighestWeights& w, int j) {
    return weight_of(I[static_cast<size_t>(j)], w[j]);
}

std::vector<BasisIndex> zero_weight_basis(const HighestWeights& w, bool finite);
bool is_admissible(const BasisIndex& I, const HighestWeights& w);
BasisIndex reversed(const BasisIndex& I);

using ZeroWeightVector = std::map<BasisIndex, cplx>;

ZeroWeightVector flip_P(const ZeroWeightVector& v, const HighestWeights& w);

// permutation matrix sending e_I to e_{I reversed}, rows indexed by the reversed basis
Eigen::MatrixXd flip_matrix(const std::vector<BasisIndex>& from, const std::vector<BasisIndex>& to);

int index_of(const std::vector<BasisIndex>& basis, const BasisIndex& I);

}  // namespace qkzb::wm
