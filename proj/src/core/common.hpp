#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qkzb {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I1{0.0, 1.0};

enum class Errc {
    ok = 0,
    domain = 1,
    pole = 2,
    singular = 3,
    grid_mismatch = 4,
    divergence = 5,
    invalid_config = 6,
    unknown_suite = 7,
    not_implemented = 8,
    contour_pinch = 9,
    fusion_singular = 10,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

const char* errc_name(Errc c) noexcept;

// e^{2 pi i x}
inline cplx e2pi(cplx x) { return std::exp(2.0 * pi * I1 * x); }

inline double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline double rel_err(cplx a, cplx b) {
    double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// Kahan-compensated complex accumulator; quadratures sum in fixed node order.
struct Accum {
    cplx sum{0.0, 0.0};
    cplx comp{0.0, 0.0};
    void add(cplx v) {
        cplx y = v - comp;
        cplx t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

}  // namespace qkzb
