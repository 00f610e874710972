#include "tdgl/domain.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tdgl/params.hpp"

namespace tdgl {

namespace {
constexpr int kMinNodes = 16;

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}
} // namespace

void PhysParams::validate() const {
    require(beta > 0, "params: beta must be > 0");
    require(gamma > 0, "params: gamma must be > 0");
    require(mass > 0, "params: mass must be > 0");
    require(hbar > 0, "params: hbar must be > 0");
    require(light_c > 0, "params: light_c must be > 0");
    require(charge != 0, "params: charge must be nonzero");
}

Domain make_domain(const DomainSpec& spec) {
    Domain d;
    d.kind = spec.kind;
    switch (spec.kind) {
    case DomainKind::Ring1D: {
        require(spec.nodes >= kMinNodes, "domain: Ring1D needs at least 16 nodes");
        require(spec.radius > 0, "domain: ring radius must be > 0");
        d.n1 = spec.nodes;
        d.n2 = 1;
        d.ring_radius = spec.radius;
        d.len1 = 2.0 * std::numbers::pi * spec.radius;
        d.h1 = d.len1 / d.n1;
        d.bc1 = AxisBc::Periodic;
        d.coord1.resize(d.n1);
        d.volume.assign(d.n1, d.h1);
        for (int i = 0; i < d.n1; ++i) d.coord1[i] = i * d.h1;
        break;
    }
    case DomainKind::Grid2D: {
        require(spec.nx >= kMinNodes && spec.ny >= kMinNodes,
                "domain: Grid2D needs at least 16 nodes per axis");
        require(spec.lx > 0 && spec.ly > 0, "domain: Grid2D extents must be > 0");
        d.n1 = spec.nx;
        d.n2 = spec.ny;
        d.bc1 = spec.bc_x;
        d.bc2 = spec.bc_y;
        d.len1 = spec.lx;
        d.len2 = spec.ly;
        d.h1 = spec.bc_x == AxisBc::Periodic ? spec.lx / spec.nx : spec.lx / (spec.nx - 1);
        d.h2 = spec.bc_y == AxisBc::Periodic ? spec.ly / spec.ny : spec.ly / (spec.ny - 1);
        d.coord1.resize(d.n1);
        d.coord2.resize(d.n2);
        for (int i = 0; i < d.n1; ++i) d.coord1[i] = i * d.h1;
        for (int j = 0; j < d.n2; ++j) d.coord2[j] = j * d.h2;
        d.volume.resize(d.node_count());
        for (int j = 0; j < d.n2; ++j) {
            double wy = d.h2;
            if (spec.bc_y == AxisBc::ZeroCurrent && (j == 0 || j == d.n2 - 1)) wy *= 0.5;
            for (int i = 0; i < d.n1; ++i) {
                double wx = d.h1;
                if (spec.bc_x == AxisBc::ZeroCurrent && (i == 0 || i == d.n1 - 1)) wx *= 0.5;
                d.volume[d.idx(i, j)] = wx * wy;
            }
        }
        break;
    }
    case DomainKind::Disc1D: {
        require(spec.nodes >= kMinNodes, "domain: Disc1D needs at least 16 nodes");
        require(spec.r_min > 0 && spec.r_max > spec.r_min,
                "domain: Disc1D needs 0 < r_min < r_max");
        require(spec.winding >= 1, "domain: Disc1D winding must be >= 1");
        d.n1 = spec.nodes;
        d.n2 = 1;
        d.r_min = spec.r_min;
        d.winding = spec.winding;
        d.len1 = spec.r_max - spec.r_min;
        d.h1 = d.len1 / (d.n1 - 1); // walls included, zero-current ends
        d.bc1 = AxisBc::ZeroCurrent;
        d.coord1.resize(d.n1);
        d.volume.resize(d.n1);
        for (int i = 0; i < d.n1; ++i) {
            double r = spec.r_min + i * d.h1;
            d.coord1[i] = r;
            double w = (i == 0 || i == d.n1 - 1) ? 0.5 * d.h1 : d.h1;
            d.volume[i] = 2.0 * std::numbers::pi * r * w; // annular measure
        }
        break;
    }
    }
    return d;
}

std::string Domain::describe() const {
    std::ostringstream os;
    switch (kind) {
    case DomainKind::Ring1D:
        os << "Ring1D{R=" << ring_radius << ", N=" << n1 << "}";
        break;
    case DomainKind::Grid2D:
        os << "Grid2D{" << len1 << "x" << len2 << ", " << n1 << "x" << n2 << "}";
        break;
    case DomainKind::Disc1D:
        os << "Disc1D{[" << r_min << "," << r_min + len1 << "], N=" << n1
           << ", n=" << winding << "}";
        break;
    }
    return os.str();
}

} // namespace tdgl
