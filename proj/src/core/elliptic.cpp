#include "elliptic.hpp"

namespace qkzb {

const char* errc_name(Errc c) noexcept {
    switch (c) {
    case Errc::ok: return "ok";
    case Errc::domain: return "domain";
    case Errc::pole: return "pole";
    case Errc::singular: return "singular";
    case Errc::grid_mismatch: return "grid_mismatch";
    case Errc::divergence: return "divergence";
    case Errc::invalid_config: return "invalid_config";
    case Errc::unknown_suite: return "unknown_suite";
    case Errc::not_implemented: return "not_implemented";
    case Errc::contour_pinch: return "contour_pinch";
    case Errc::fusion_singular: return "fusion_singular";
    }
    return "unknown";
}

namespace ell {

cplx th_den(cplx t, cplx tau, const char* where) {
    cplx v = th(t, tau);
    if (std::abs(v) < 1e-13)
        throw Error(Errc::pole, std::string(where) + ": vanishing theta denominator");
    return v;
}

}  // namespace ell
}  // namespace qkzb
