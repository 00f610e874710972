#pragma once

#include "tdgl/ops.hpp"
#include "tdgl/state.hpp"

namespace tdgl {

/// All derived trajectory fields of one snapshot.
///
///   q_stat = beta |psi|^2 - (hbar^2/2m) lap|psi| / |psi|
///   q_dyn  = (hbar / 2|psi|^2) (gamma d|psi|^2/dt - (1/gamma) div(|psi|^2 v))
///   q_dep  = 2 (gamma + 1/gamma)(q_stat + alpha + (m/2) v^2) + 2 gamma q_dyn
///   f_quantum = -grad(q_stat + q_dyn),  f_em = q (E + v x B / c)
///   accel = (v . grad) v + dv/dt,  newton_residual = f_quantum + f_em - m accel
///
/// Every time derivative is assembled analytically from dpsi/dt = gl_rhs (and
/// the exact dA/dt), never from differences of successive steps. Nodes whose
/// |psi|^2 sits below the stencil floor are flagged in mask; their derived
/// values use floored denominators and are excluded from every reported norm.
struct BohmFields {
    VField v;
    Mask mask;
    RField q_stat;
    RField q_dyn;
    RField q_dep;
    RField dpsi2_dt; // 2 Re(psi* dpsi/dt)
    VField f_quantum;
    VField f_em;
    VField accel;
    VField newton_residual;
};

RField q_stat_field(const CField& psi, const Domain& dom, const PhysParams& p,
                    const StencilConfig& st, Mask* mask = nullptr);

RField q_dyn_field(const CField& psi, const VField& A, const Domain& dom, const PhysParams& p,
                   const CField& dpsi_dt, const StencilConfig& st, Mask* mask = nullptr);

RField q_dep_field(const CField& psi, const VField& A, const Domain& dom, const PhysParams& p,
                   const CField& dpsi_dt, const StencilConfig& st, Mask* mask = nullptr);

/// Populates every derived field (dpsi/dt taken from gl_rhs internally).
BohmFields force_decomposition(const FieldState& s, const Domain& dom, const PhysParams& p,
                               const StencilConfig& st);

/// Cell-building integrand q_dep * |psi|^2 (floored assembly, zero where empty).
RField depairing_density(const FieldState& s, const Domain& dom, const PhysParams& p,
                         const StencilConfig& st);

/// Residual of the combined density identity
///   d|psi|^2/dt + div(|psi|^2 v) + q_dep |psi|^2 / hbar = 0,
/// which ties the potentials together; discretely O(h^2) on smooth states.
RField density_identity_residual(const FieldState& s, const Domain& dom, const PhysParams& p,
                                 const StencilConfig& st);

struct ViscousReport {
    double rel_discrepancy = 0.0; // residual_inf / viscous_inf (0 when both vanish)
    double residual_inf = 0.0;    // ||-grad q_dyn - (hbar/2 gamma) lap v||
    double viscous_inf = 0.0;     // ||(hbar/2 gamma) lap v||
    double nonuniformity = 0.0;   // (max|psi| - min|psi|) / max|psi|
};

/// Checks -grad Q_dyn against the viscous form (hbar/2 gamma) lap v on a
/// near-uniform-|psi|, magnetic-field-free state. Throws std::invalid_argument
/// (with the measured nonuniformity) when |psi| varies more than the bound.
ViscousReport viscous_force_check(const FieldState& s, const Domain& dom, const PhysParams& p,
                                  const StencilConfig& st, double nonuniformity_bound = 1e-6);

struct StationaryReport {
    double continuity_inf = 0.0; // || div(|psi|^2 v) ||
    double energy_inf = 0.0;     // || q_stat + alpha + (m/2) v^2 ||
    double newton_inf = 0.0;     // || -grad q_stat + q(E + v x B/c) - m (v.grad)v ||
    std::size_t masked_nodes = 0;
    bool all_masked = false;
};

/// Residuals of the stationary identities; meaningful after relax_to_stationary.
StationaryReport stationary_checks(const FieldState& s, const Domain& dom, const PhysParams& p,
                                   const StencilConfig& st);

/// Infinity norm over unmasked nodes.
double masked_inf_norm(const RField& f, const Mask& mask);
double masked_inf_norm(const VField& f, const Mask& mask);

} // namespace tdgl
