#pragma once

#include "tdgl/domain.hpp"
#include "tdgl/field.hpp"
#include "tdgl/params.hpp"

namespace tdgl {

/// Finite-difference configuration shared by all operators.
/// epsilon_rho is a dimensionless floor on |psi|^2 relative to the domain
/// maximum, applied wherever a field is divided by |psi|^2; floored nodes are
/// flagged in a companion mask instead of raising.
struct StencilConfig {
    int order = 2;              // central-difference accuracy order, 2 or 4
    double epsilon_rho = 1e-12; // 0 < epsilon_rho <= 1e-6

    /// At zero-current walls: false = one-sided stencils of matching order
    /// (fields taken as given), true = even mirror reflection (the discrete
    /// Neumann condition the time stepper imposes). Derived-field diagnostics
    /// of solver states use the mirror form for second derivatives so that
    /// they see the same operator the solver applied.
    bool mirror_edges = false;

    void validate() const;

    StencilConfig with_mirror() const {
        StencilConfig c = *this;
        c.mirror_edges = true;
        return c;
    }
};

// ---------------------------------------------------------------------------
// Scalar/vector building blocks. Central differences of the configured order;
// periodic wrap on periodic axes, one-sided stencils of matching order at
// zero-current boundaries. On Disc1D the cylindrical corrections are included
// (laplacian f = f'' + f'/r, divergence u = u_r' + u_r/r, vector laplacian
// gets the -1/r^2 terms).
// ---------------------------------------------------------------------------

RField gradient_axis(const RField& f, const Domain& dom, int axis, const StencilConfig& st);
RField second_derivative_axis(const RField& f, const Domain& dom, int axis, const StencilConfig& st);
CField gradient_axis_c(const CField& f, const Domain& dom, int axis, const StencilConfig& st);
CField second_derivative_axis_c(const CField& f, const Domain& dom, int axis, const StencilConfig& st);

VField gradient_scalar(const RField& f, const Domain& dom, const StencilConfig& st);
RField laplacian_scalar(const RField& f, const Domain& dom, const StencilConfig& st);
RField divergence(const VField& u, const Domain& dom, const StencilConfig& st);
VField laplacian_vector(const VField& u, const Domain& dom, const StencilConfig& st);

/// Plain (non-covariant) laplacian of a complex field; on Disc1D this is the
/// radial part only, psi'' + psi'/r, without the winding term.
CField laplacian_complex(const CField& psi, const Domain& dom, const StencilConfig& st);

// ---------------------------------------------------------------------------
// Gauge-covariant operators
// ---------------------------------------------------------------------------

/// D psi = (-i hbar grad - (q/c) A) psi per node. On Disc1D the tangential
/// component uses the factored winding: D_theta psi = (-n hbar / r - (q/c) A_theta) psi.
CVField covariant_gradient(const CField& psi, const VField& A, const Domain& dom,
                           const PhysParams& p, const StencilConfig& st);

/// D^2 psi, expanded as -hbar^2 lap psi + (i hbar q/c)(div A) psi
/// + (2 i hbar q/c) A . grad psi + (q/c)^2 |A|^2 psi, with the Disc1D winding
/// folded into an exact tangential kinetic-momentum factor.
CField covariant_laplacian(const CField& psi, const VField& A, const Domain& dom,
                           const PhysParams& p, const StencilConfig& st);

struct VelocityField {
    VField v;
    Mask mask; // nodes where |psi|^2 fell below the floor
};

/// Pair guidance velocity v = (hbar Im(psi* grad psi)/max(|psi|^2, eps) - (q/c) A)/m.
/// Algebraically equal to (hbar grad phi - (q/c) A)/m wherever psi != 0; no
/// phase unwrapping is ever performed.
VelocityField velocity_field(const CField& psi, const VField& A, const Domain& dom,
                             const PhysParams& p, const StencilConfig& st);

// ---------------------------------------------------------------------------
// Off-grid sampling
// ---------------------------------------------------------------------------

/// Interpolates a scalar field at an arbitrary position (wrapped on periodic
/// axes). Linear for order 2, cubic (4-point Lagrange) for order 4. Throws for
/// positions outside a non-periodic axis.
double interpolate(const RField& f, const Domain& dom, const std::array<double, 2>& pos,
                   const StencilConfig& st);

std::array<double, 2> interpolate_vec(const VField& u, const Domain& dom,
                                      const std::array<double, 2>& pos, const StencilConfig& st);

// ---------------------------------------------------------------------------
// Small helpers shared by solvers and diagnostics
// ---------------------------------------------------------------------------

double max_abs(const RField& f);
double max_abs2(const CField& psi);

/// Integral of f dV over the domain (sequential summation; deterministic).
double integrate(const RField& f, const Domain& dom);

} // namespace tdgl
