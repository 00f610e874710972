#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "tdgl/domain.hpp"

namespace tdgl {

using Complex = std::complex<double>;
using CField = std::vector<Complex>;  // complex scalar per node
using RField = std::vector<double>;   // real scalar per node
using Mask = std::vector<std::uint8_t>; // 1 = node floored/undefined

/// Real vector field; one tangential component on Ring1D, two components
/// elsewhere (x/y on Grid2D, r/theta on Disc1D).
struct VField {
    std::array<RField, 2> comp;
    int ncomp = 1;

    static VField zeros(const Domain& dom) {
        VField f;
        f.ncomp = dom.ncomp();
        for (int c = 0; c < f.ncomp; ++c) f.comp[c].assign(dom.node_count(), 0.0);
        return f;
    }
    RField& operator[](int c) { return comp[c]; }
    const RField& operator[](int c) const { return comp[c]; }
};

/// Complex vector field (covariant gradients).
struct CVField {
    std::array<CField, 2> comp;
    int ncomp = 1;

    static CVField zeros(const Domain& dom) {
        CVField f;
        f.ncomp = dom.ncomp();
        for (int c = 0; c < f.ncomp; ++c) f.comp[c].assign(dom.node_count(), Complex{0.0, 0.0});
        return f;
    }
    CField& operator[](int c) { return comp[c]; }
    const CField& operator[](int c) const { return comp[c]; }
};

inline RField abs2_field(const CField& psi) {
    RField out(psi.size());
    for (std::size_t k = 0; k < psi.size(); ++k) out[k] = std::norm(psi[k]);
    return out;
}

inline RField abs_field(const CField& psi) {
    RField out(psi.size());
    for (std::size_t k = 0; k < psi.size(); ++k) out[k] = std::abs(psi[k]);
    return out;
}

} // namespace tdgl
