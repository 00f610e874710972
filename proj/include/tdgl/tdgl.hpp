#pragma once

#include <cstdint>

#include "tdgl/ops.hpp"
#include "tdgl/state.hpp"

namespace tdgl {

enum class StepMethod {
    Rk4Explicit,  ///< classical RK4, explicit; dt bounded by the diffusion limit
    SemiImplicit  ///< IMEX Euler: plain diffusion implicit, rest explicit
};

struct SolverConfig {
    double dt = 1e-3;
    StepMethod method = StepMethod::Rk4Explicit;
    double t_end = 1.0;
    int snapshot_stride = 100;
    double tol_stat = 1e-10;   // infinity-norm residual target for relaxation
    long max_relax_steps = 5000000;

    void validate() const;
};

/// Right-hand side of the evolution:
///   dpsi/dt = -(1/(gamma hbar)) [ (1/2m) D^2 psi + alpha psi + beta |psi|^2 psi ].
/// Pure function; zero-current walls are treated with the mirror (Neumann)
/// stencil regardless of st.mirror_edges, since this is the solver operator.
CField gl_rhs(const FieldState& s, const Domain& dom, const PhysParams& p,
              const StencilConfig& st);

double residual_inf(const FieldState& s, const Domain& dom, const PhysParams& p,
                    const StencilConfig& st);

/// Largest stable dt for explicit stepping: c_stab / lambda_max, where
/// lambda_max bounds the spectral radius of the linearized right-hand side
/// (diffusion hbar/(2 m gamma) per axis plus the local potential terms) and
/// c_stab = 2.785 is the RK4 real-axis stability radius.
double stability_limit(const Domain& dom, const PhysParams& p, const FieldState& s);

/// Time stepper with reusable workspace. Holds references it does not own;
/// keep domain/params/config alive for its lifetime.
class Stepper {
  public:
    Stepper(const Domain& dom, const PhysParams& p, const SolverConfig& cfg,
            const GaugeSchedule& gauge, const StencilConfig& st);

    /// Advances psi by one step of cfg.method and refreshes A, E, B at t+dt.
    /// Throws std::runtime_error if psi turns non-finite (instability).
    void step(FieldState& s);

    const StencilConfig& solver_stencil() const { return st_; }

  private:
    void step_rk4(FieldState& s);
    void step_imex(FieldState& s);
    void solve_helmholtz(const CField& rhs, double c, CField& out) const;

    const Domain& dom_;
    const PhysParams& p_;
    const SolverConfig& cfg_;
    const GaugeSchedule& gauge_;
    StencilConfig st_; // mirror_edges forced on
    bool gauge_static_ = true;

    CField k1_, k2_, k3_, k4_, tmp_;
    FieldState stage_; // reusable stage workspace
};

struct RelaxReport {
    long iterations = 0;
    double residual = 0.0;
};

/// Integrates until the stationarity residual ||gl_rhs||_inf falls below
/// cfg.tol_stat. Throws std::runtime_error when max_relax_steps is exhausted.
RelaxReport relax_to_stationary(FieldState& s, const Domain& dom, const PhysParams& p,
                                const SolverConfig& cfg, const GaugeSchedule& gauge,
                                const StencilConfig& st);

/// Adds independent complex per-node perturbations of the given RMS amplitude.
/// Deterministic per seed (own generator, not std::distribution).
void seed_noise(FieldState& s, double amplitude, std::uint64_t seed);

/// Ring1D: adds sum_{|n| <= n_max} amplitude * taper^|n| * e^{i phase_n} e^{-i n theta}
/// with seeded random phases; taper = 1 (default) starts every harmonic at
/// |T_n| = amplitude. The spectrum is resolution-independent for a fixed seed.
void seed_noise_harmonics(FieldState& s, const Domain& dom, double amplitude, int n_max,
                          std::uint64_t seed, double taper = 1.0);

/// Discrete Fourier amplitude T_n = (1/N) sum_j psi_j e^{+i n theta_j} (Ring1D).
Complex ring_mode_amplitude(const FieldState& s, const Domain& dom, int n);

/// Integer phase circulation of psi around the ring; Disc1D returns the
/// domain winding.
int winding_number(const CField& psi, const Domain& dom);

/// Least-squares slope of log(values) against times (growth-rate fits).
double fit_log_slope(const std::vector<double>& times, const std::vector<double>& values);

} // namespace tdgl
