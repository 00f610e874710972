#pragma once

#include <optional>
#include <string>

#include "tdgl/domain.hpp"
#include "tdgl/field.hpp"
#include "tdgl/params.hpp"

namespace tdgl {

enum class GaugeKind {
    Zero,              ///< A = 0
    UniformFieldDisc,  ///< symmetric gauge, A = (B0 r / 2) theta_hat; B = B0 z_hat
    RingFlux,          ///< uniform tangential A with loop integral Phi = flux_ratio * Phi_0
    UniformFieldLandau ///< Landau gauge on Grid2D, A = -B0 (y - y_c) x_hat; B = B0 z_hat
};

/// Optional smooth turn-on: factor 0 before t0, 1 after t1, C^1 smoothstep
/// between (A must stay differentiable in t wherever E is requested).
struct GaugeRamp {
    double t0 = 0.0;
    double t1 = 1.0;
};

/// Closed-form vector-potential schedule. The scalar potential is identically
/// zero (gauge choice), so E = -(1/c) dA/dt, evaluated analytically.
struct GaugeSchedule {
    GaugeKind kind = GaugeKind::Zero;
    double b0 = 0.0;         // UniformFieldDisc / UniformFieldLandau
    double flux_ratio = 0.0; // RingFlux: Phi / Phi_0
    std::optional<GaugeRamp> ramp;

    std::string describe() const;
};

struct GaugeSample {
    VField A;
    VField E;
    RField B; // z-component (0 on the Ring1D wire)
};

/// Samples A, E = -(1/c) dA/dt and the analytic B at time t.
/// Total over the catalog; throws only for kind/domain combinations that have
/// no meaning (RingFlux off the ring, Landau gauge off the grid).
GaugeSample sample_gauge(const GaugeSchedule& g, const Domain& dom, const PhysParams& p, double t);

} // namespace tdgl
