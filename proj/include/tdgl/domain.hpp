#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace tdgl {

enum class DomainKind {
    Ring1D,  ///< thin periodic ring, coordinate = arc length s in [0, 2*pi*R)
    Grid2D,  ///< rectangle, per-axis periodic or zero-current boundaries
    Disc1D   ///< radial reduction of an axisymmetric disc/annulus state with
             ///< a fixed integer winding; fields depend on r only
};

enum class AxisBc { Periodic, ZeroCurrent };

struct DomainSpec {
    DomainKind kind = DomainKind::Ring1D;
    // Ring1D
    double radius = 1.0;
    int nodes = 256;
    // Grid2D
    double lx = 1.0, ly = 1.0;
    int nx = 64, ny = 64;
    AxisBc bc_x = AxisBc::Periodic, bc_y = AxisBc::Periodic;
    // Disc1D: annulus [r_min, r_max], zero-current ends, winding n of the
    // factored-out phase exp(-i n theta)
    double r_min = 0.5, r_max = 2.0;
    int winding = 1;
};

/// Discretized geometry. Immutable after make_domain; safe to share.
///
/// Node layout: periodic axes place n nodes at i*h with h = L/n; zero-current
/// axes place n nodes at i*h with h = L/(n-1) including both walls (trapezoid
/// quadrature weights, half volume at walls). Grid2D is row-major, idx = j*nx+i.
struct Domain {
    DomainKind kind;
    int n1 = 0, n2 = 1;       // nodes per axis (n2 = 1 for 1D kinds)
    double h1 = 0, h2 = 0;    // node spacing per axis
    AxisBc bc1 = AxisBc::Periodic, bc2 = AxisBc::Periodic;
    double len1 = 0, len2 = 0; // axis extents (ring: circumference)

    double ring_radius = 0;
    double r_min = 0;          // Disc1D inner radius
    int winding = 0;           // Disc1D factored winding

    std::vector<double> coord1; // per-node axis-1 coordinate (s, x, or r)
    std::vector<double> coord2; // axis-2 coordinate (Grid2D only)
    std::vector<double> volume; // per-node quadrature weight (dV)

    std::size_t node_count() const { return static_cast<std::size_t>(n1) * n2; }
    int ncomp() const { return kind == DomainKind::Ring1D ? 1 : 2; }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * n1 + i; }

    bool periodic1() const { return bc1 == AxisBc::Periodic; }
    bool periodic2() const { return bc2 == AxisBc::Periodic; }

    /// Disc1D radius of node i.
    double r(int i) const { return coord1[i]; }

    std::string describe() const;
};

/// Builds the discrete geometry. Throws std::invalid_argument for node counts
/// below the minimum (16 per axis) or nonpositive extents.
Domain make_domain(const DomainSpec& spec);

} // namespace tdgl
