#pragma once

#include "tdgl/params.hpp"

namespace tdgl {

/// Closed-form reference values for the axisymmetric disc state
/// psi = f(r) e^{-i n theta} in the uniform field B = B0 z_hat with
/// A = (B0 r / 2) theta_hat. Pure formula evaluation, no grids; the trusted
/// side of every disc comparison.
struct DiscOracle {
    int n = 1;          // winding, >= 1
    double b0 = 1.0;    // field strength, > 0
    PhysParams params;  // alpha enters neg_q_stat only

    DiscOracle(int n_, double b0_, const PhysParams& p);

    /// r where the velocity changes sign and the quantum potential peaks:
    /// r_B = sqrt(2 n c hbar / (|q| B0)).
    double r_balance() const;

    /// Tangential speed v(r) = (1/m)(|q| B0 r / (2c) - n hbar / r).
    double velocity(double r) const;

    /// Radial Lorentz + centrifugal sum:
    /// (1/(m r)) (n^2 hbar^2 / r^2 - q^2 B0^2 r^2 / (4 c^2)).
    double force_sum(double r) const;

    /// -Q_stat(r) = (1/2m)(n hbar / r - |q| B0 r / (2c))^2 + alpha.
    double neg_q_stat(double r) const;
};

/// Thin-ring quench spectrum: harmonics T_n(t) = T_n(0) e^{lambda_n t} with
/// lambda_n = -alpha/(hbar gamma) - hbar (n - Phi/Phi_0)^2 / (2 m gamma R^2).
struct RingOracle {
    double radius = 1.0;
    double flux_ratio = 0.0; // Phi / Phi_0
    PhysParams params;

    RingOracle(double radius_, double flux_ratio_, const PhysParams& p);

    double lambda(int n) const;

    /// Fastest-growing winding: argmax lambda over |n| <= 10.
    int dominant_index() const;

    /// True when exactly one harmonic grows (the simple single-mode case).
    bool single_mode() const;

    struct ExpectedFields {
        double q_stat_bound; // |Q_stat| <= beta max|psi|^2 in the linear window
        double q_dyn;        // hbar gamma lambda_dom
        double q_dep;        // -2 hbar lambda_dom
        double pair_speed;   // (hbar / m R) |Phi/Phi_0 - n_dom|
    };

    /// Single-mode linear-window constants. Throws std::invalid_argument when
    /// the configuration is multi-mode; max_abs2_psi feeds the Q_stat bound.
    ExpectedFields expected_fields(double max_abs2_psi) const;
};

} // namespace tdgl
