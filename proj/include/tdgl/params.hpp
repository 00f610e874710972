#pragma once

#include <cmath>
#include <numbers>

namespace tdgl {

/// Material and fundamental constants, in simulation units.
///
/// The default unit system sets hbar = mass = light_c = |charge| = gamma = 1,
/// so alpha, beta and the applied fields remain the only free knobs. All
/// constants stay explicit so dimensional runs are possible.
///
/// charge carries its sign (Cooper pairs are negative); expressions that the
/// theory states with |q| must use abs_charge().
struct PhysParams {
    double alpha = -1.0;    ///< condensation parameter; sign flips at the critical temperature
    double beta = 1.0;      ///< self-interaction, > 0
    double gamma = 1.0;     ///< relaxation constant, > 0
    double mass = 1.0;      ///< pair mass, > 0
    double charge = -1.0;   ///< pair charge, != 0, sign carried
    double hbar = 1.0;      ///< action quantum, > 0
    double light_c = 1.0;   ///< speed of light, > 0

    double abs_charge() const { return std::abs(charge); }

    /// h = 2*pi*hbar, used only through the flux quantum.
    double planck_h() const { return 2.0 * std::numbers::pi * hbar; }

    /// Flux quantum Phi_0 = c*h/|q|. Equals 2*pi in default units.
    double flux_quantum() const { return light_c * planck_h() / abs_charge(); }

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;
};

} // namespace tdgl
