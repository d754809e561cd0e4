#include "weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qkzb::wm {

HighestWeights::HighestWeights(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
    if (lambdas_.empty())
        throw Error(Errc::domain, "HighestWeights: need at least one slot");
    double s = std::accumulate(lambdas_.begin(), lambdas_.end(), 0.0);
    double half = s / 2.0;
    double r = std::round(half);
    if (std::abs(half - r) > 1e-12 || r < 0)
        throw Error(Errc::domain, "HighestWeights: sum of weights must be twice a nonnegative integer");
    m_ = static_cast<int>(r);
}

bool HighestWeights::integral() const {
    return std::all_of(lambdas_.begin(), lambdas_.end(),
                       [](double L) { return L >= 0 && std::abs(L - std::round(L)) < 1e-12; });
}

HighestWeights HighestWeights::reversed() const {
    std::vector<double> r(lambdas_.rbegin(), lambdas_.rend());
    return HighestWeights(std::move(r));
}

double weight_of(int k, double Lambda) { return Lambda - 2.0 * k; }

std::vector<BasisIndex> zero_weight_basis(const HighestWeights& w, bool finite) {
    const int n = w.n();
    const int m = w.m();
    std::vector<int> cap(static_cast<size_t>(n), m);
    if (finite) {
        if (!w.integral())
            throw Error(Errc::domain, "zero_weight_basis: finite modules need integer weights");
        for (int i = 0; i < n; ++i) cap[static_cast<size_t>(i)] = std::min(m, static_cast<int>(std::lround(w[i])));
    }
    std::vector<BasisIndex> out;
    BasisIndex cur(static_cast<size_t>(n), 0);
    // lexicographic enumeration of compositions of m
    auto rec = [&](auto&& self, int slot, int left) -> void {
        if (slot == n - 1) {
            if (left <= cap[static_cast<size_t>(slot)]) {
                cur[static_cast<size_t>(slot)] = left;
                out.push_back(cur);
            }
            return;
        }
        for (int k = 0; k <= std::min(left, cap[static_cast<size_t>(slot)]); ++k) {
            cur[static_cast<size_t>(slot)] = k;
            self(self, slot + 1, left - k);
        }
    };
    rec(rec, 0, m);
    return out;
}

bool is_admissible(const BasisIndex& I, const HighestWeights& w) {
    if (!w.integral())
        throw Error(Errc::domain, "is_admissible: weights must be nonnegative integers");
    for (int a = 0; a < w.n(); ++a)
        if (I[static_cast<size_t>(a)] > std::lround(w[a]))
            return false;
    return true;
}

BasisIndex reversed(const BasisIndex& I) { return BasisIndex(I.rbegin(), I.rend()); }

ZeroWeightVector flip_P(const ZeroWeightVector& v, const HighestWeights&) {
    ZeroWeightVector out;
    for (const auto& [I, c] : v) out[reversed(I)] = c;
    return out;
}

int index_of(const std::vector<BasisIndex>& basis, const BasisIndex& I) {
    auto it = std::find(basis.begin(), basis.end(), I);
    if (it == basis.end())
        return -1;
    return static_cast<int>(it - basis.begin());
}

Eigen::MatrixXd flip_matrix(const std::vector<BasisIndex>& from, const std::vector<BasisIndex>& to) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(to.size()), static_cast<Eigen::Index>(from.size()));
    for (size_t c = 0; c < from.size(); ++c) {
        int r = index_of(to, reversed(from[c]));
        if (r < 0)
            throw Error(Errc::domain, "flip_matrix: reversed index missing from target basis");
        P(r, static_cast<Eigen::Index>(c)) = 1.0;
    }
    return P;
}

}  // namespace qkzb::wm
