#include "tdgl/tdgl.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tdgl/rng.hpp"

namespace tdgl {

void SolverConfig::validate() const {
    if (!(dt > 0)) throw std::invalid_argument("solver: dt must be > 0");
    if (!(tol_stat > 0)) throw std::invalid_argument("solver: tol_stat must be > 0");
    if (snapshot_stride < 1) throw std::invalid_argument("solver: snapshot_stride must be >= 1");
    if (max_relax_steps < 1) throw std::invalid_argument("solver: max_relax_steps must be >= 1");
}

CField gl_rhs(const FieldState& s, const Domain& dom, const PhysParams& p,
              const StencilConfig& st) {
    const StencilConfig stm = st.with_mirror();
    CField d2 = covariant_laplacian(s.psi, s.A, dom, p, stm);
    const double inv = -1.0 / (p.gamma * p.hbar);
    const double half_m = 0.5 / p.mass;
    CField out(s.psi.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const Complex& z = s.psi[k];
        out[k] = inv * (half_m * d2[k] + (p.alpha + p.beta * std::norm(z)) * z);
    }
    return out;
}

double residual_inf(const FieldState& s, const Domain& dom, const PhysParams& p,
                    const StencilConfig& st) {
    CField r = gl_rhs(s, dom, p, st);
    double m = 0.0;
    for (const Complex& z : r) m = std::max(m, std::abs(z));
    return m;
}

double stability_limit(const Domain& dom, const PhysParams& p, const FieldState& s) {
    const double nu = p.hbar / (2.0 * p.mass * p.gamma); // diffusion coefficient
    double lam = nu * 4.0 / (dom.h1 * dom.h1);
    if (dom.kind == DomainKind::Grid2D) lam += nu * 4.0 / (dom.h2 * dom.h2);

    // local potential terms, evaluated on the current state
    const double qc = p.charge / p.light_c;
    const double base = std::abs(p.alpha) + p.beta * max_abs2(s.psi);
    double kin_max = 0.0;
    for (std::size_t k = 0; k < s.psi.size(); ++k) {
        double a2 = s.A[0][k] * s.A[0][k];
        if (dom.ncomp() == 2) a2 += s.A[1][k] * s.A[1][k];
        double kin = qc * qc * a2;
        if (dom.kind == DomainKind::Disc1D) {
            const double pt = dom.winding * p.hbar / dom.r(static_cast<int>(k)) + qc * s.A[1][k];
            kin = std::max(kin, pt * pt);
        }
        kin_max = std::max(kin_max, kin);
    }
    lam += (base + 0.5 * kin_max / p.mass) / (p.gamma * p.hbar);

    constexpr double c_stab = 2.785; // RK4 real-axis stability radius
    return c_stab / lam;
}

namespace {

bool finite(const CField& psi) {
    for (const Complex& z : psi)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

bool gauge_is_static(const GaugeSchedule& g) { return !g.ramp.has_value(); }

} // namespace

Stepper::Stepper(const Domain& dom, const PhysParams& p, const SolverConfig& cfg,
                 const GaugeSchedule& gauge, const StencilConfig& st)
    : dom_(dom), p_(p), cfg_(cfg), gauge_(gauge), st_(st.with_mirror()) {
    cfg.validate();
    st_.validate();
    if (cfg.method == StepMethod::SemiImplicit && st_.order != 2)
        throw std::invalid_argument("stepper: semi-implicit supports order 2 only");
    gauge_static_ = gauge_is_static(gauge);
    const std::size_t n = dom.node_count();
    k1_.resize(n);
    k2_.resize(n);
    k3_.resize(n);
    k4_.resize(n);
    tmp_.resize(n);
}

void Stepper::step(FieldState& s) {
    if (cfg_.method == StepMethod::Rk4Explicit)
        step_rk4(s);
    else
        step_imex(s);
    if (!finite(s.psi))
        throw std::runtime_error("step: non-finite psi (instability detected) at t=" +
                                 std::to_string(s.t));
}

void Stepper::step_rk4(FieldState& s) {
    const double dt = cfg_.dt;
    const double t0 = s.t;
    const std::size_t n = s.psi.size();

    if (stage_.psi.size() != n) stage_ = s; // gauge arrays copied once
    FieldState& stage = stage_;

    k1_ = gl_rhs(s, dom_, p_, st_);

    if (!gauge_static_) refresh_gauge(stage, dom_, gauge_, p_, t0 + 0.5 * dt);
    for (std::size_t k = 0; k < n; ++k) stage.psi[k] = s.psi[k] + 0.5 * dt * k1_[k];
    k2_ = gl_rhs(stage, dom_, p_, st_);

    for (std::size_t k = 0; k < n; ++k) stage.psi[k] = s.psi[k] + 0.5 * dt * k2_[k];
    k3_ = gl_rhs(stage, dom_, p_, st_);

    if (!gauge_static_) refresh_gauge(stage, dom_, gauge_, p_, t0 + dt);
    for (std::size_t k = 0; k < n; ++k) stage.psi[k] = s.psi[k] + dt * k3_[k];
    k4_ = gl_rhs(stage, dom_, p_, st_);

    for (std::size_t k = 0; k < n; ++k)
        s.psi[k] += dt / 6.0 * (k1_[k] + 2.0 * k2_[k] + 2.0 * k3_[k] + k4_[k]);

    refresh_gauge(s, dom_, gauge_, p_, t0 + dt);
}

// (I - dt nu lap) psi_new = psi + dt (rhs(psi) - nu lap psi)
void Stepper::step_imex(FieldState& s) {
    const double dt = cfg_.dt;
    const double nu = p_.hbar / (2.0 * p_.mass * p_.gamma);
    const std::size_t n = s.psi.size();

    k1_ = gl_rhs(s, dom_, p_, st_);
    k2_ = laplacian_complex(s.psi, dom_, st_);
    for (std::size_t k = 0; k < n; ++k)
        tmp_[k] = s.psi[k] + dt * (k1_[k] - nu * k2_[k]);

    solve_helmholtz(tmp_, dt * nu, s.psi);
    refresh_gauge(s, dom_, gauge_, p_, s.t + dt);
}

namespace {

// Tridiagonal solve (Thomas), real coefficients, complex right-hand side.
void thomas(std::vector<double>& a, std::vector<double>& b, std::vector<double>& c,
            CField& d, CField& x) {
    const std::size_t n = b.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    x[n - 1] = d[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (d[i] - c[i] * x[i + 1]) / b[i];
}

} // namespace

void Stepper::solve_helmholtz(const CField& rhs, double c, CField& out) const {
    const std::size_t n = dom_.node_count();
    out.resize(n);

    if (dom_.kind == DomainKind::Ring1D) {
        // cyclic tridiagonal via Sherman-Morrison
        const double h2 = dom_.h1 * dom_.h1;
        const double off = -c / h2;
        const double diag = 1.0 + 2.0 * c / h2;
        const double alpha = off, beta = off; // corner entries
        const double gamma_sm = -diag;

        std::vector<double> a(n, off), b(n, diag), cc(n, off);
        b[0] = diag - gamma_sm;
        b[n - 1] = diag - alpha * beta / gamma_sm;
        a[0] = 0.0;
        cc[n - 1] = 0.0;

        CField d = rhs, y(n);
        std::vector<double> a2 = a, b2 = b, c2 = cc;
        thomas(a2, b2, c2, d, y);

        CField u(n, Complex{0.0, 0.0});
        u[0] = gamma_sm;
        u[n - 1] = alpha;
        a2 = a; b2 = b; c2 = cc;
        CField uc = u, z(n);
        thomas(a2, b2, c2, uc, z);

        // v = e_0 + (beta/gamma) e_{n-1}
        const Complex num = y[0] + (beta / gamma_sm) * y[n - 1];
        const Complex den = 1.0 + z[0] + (beta / gamma_sm) * z[n - 1];
        for (std::size_t i = 0; i < n; ++i) out[i] = y[i] - z[i] * num / den;
        return;
    }

    if (dom_.kind == DomainKind::Disc1D) {
        // rows: -(c/h^2 - c/(2 h r)) psi_{i-1} + (1 + 2c/h^2) psi_i
        //       -(c/h^2 + c/(2 h r)) psi_{i+1} = b_i, mirror rows at walls
        const double h = dom_.h1, h2 = h * h;
        std::vector<double> a(n), b(n), cc(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = dom_.r(static_cast<int>(i));
            a[i] = -(c / h2 - c / (2.0 * h * r));
            b[i] = 1.0 + 2.0 * c / h2;
            cc[i] = -(c / h2 + c / (2.0 * h * r));
        }
        // mirror: lap_0 = 2(psi_1 - psi_0)/h^2, first-derivative term vanishes
        a[0] = 0.0;
        cc[0] = -2.0 * c / h2;
        a[n - 1] = -2.0 * c / h2;
        cc[n - 1] = 0.0;
        CField d = rhs;
        thomas(a, b, cc, d, out);
        return;
    }

    // Grid2D: conjugate gradients on (I - c lap) with trapezoid weights, which
    // make the mirrored operator self-adjoint.
    const StencilConfig stm = st_;
    auto apply = [&](const CField& x, CField& y) {
        CField lap = laplacian_complex(x, dom_, stm);
        for (std::size_t k = 0; k < n; ++k) y[k] = x[k] - c * lap[k];
    };
    auto dotw = [&](const CField& u, const CField& v) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            acc += dom_.volume[k] *
                   (u[k].real() * v[k].real() + u[k].imag() * v[k].imag());
        return acc;
    };

    CField x = rhs, r(n), pvec(n), Ap(n);
    apply(x, Ap);
    for (std::size_t k = 0; k < n; ++k) r[k] = rhs[k] - Ap[k];
    pvec = r;
    double rs = dotw(r, r);
    const double tol2 = 1e-26 * std::max(dotw(rhs, rhs), 1e-300);
    for (int it = 0; it < 10000 && rs > tol2; ++it) {
        apply(pvec, Ap);
        const double alpha = rs / dotw(pvec, Ap);
        for (std::size_t k = 0; k < n; ++k) {
            x[k] += alpha * pvec[k];
            r[k] -= alpha * Ap[k];
        }
        const double rs2 = dotw(r, r);
        const double beta = rs2 / rs;
        rs = rs2;
        for (std::size_t k = 0; k < n; ++k) pvec[k] = r[k] + beta * pvec[k];
    }
    out = std::move(x);
}

RelaxReport relax_to_stationary(FieldState& s, const Domain& dom, const PhysParams& p,
                                const SolverConfig& cfg, const GaugeSchedule& gauge,
                                const StencilConfig& st) {
    Stepper stepper(dom, p, cfg, gauge, st);
    if (cfg.method == StepMethod::Rk4Explicit) {
        const double lim = stability_limit(dom, p, s);
        if (cfg.dt > lim)
            throw std::invalid_argument("relax: dt " + std::to_string(cfg.dt) +
                                        " exceeds explicit stability limit " +
                                        std::to_string(lim));
    }
    const long check_every = 25;
    RelaxReport rep;
    double best = std::numeric_limits<double>::infinity();
    int stalled_checks = 0;
    for (long it = 0; it < cfg.max_relax_steps; ++it) {
        stepper.step(s);
        if ((it + 1) % check_every == 0 || it + 1 == cfg.max_relax_steps) {
            rep.iterations = it + 1;
            rep.residual = residual_inf(s, dom, p, st);
            if (rep.residual <= cfg.tol_stat) return rep;
            // a residual pinned at its roundoff floor will never improve
            if (rep.residual < best * (1.0 - 1e-4)) {
                best = rep.residual;
                stalled_checks = 0;
            } else if (++stalled_checks >= 200) {
                std::ostringstream os;
                os << "relax: residual stalled at " << rep.residual << " (tolerance "
                   << cfg.tol_stat << ") after " << rep.iterations << " steps";
                throw std::runtime_error(os.str());
            }
        }
    }
    std::ostringstream os;
    os << "relax: no convergence after " << cfg.max_relax_steps << " steps, residual "
       << rep.residual << " (tolerance " << cfg.tol_stat << ")";
    throw std::runtime_error(os.str());
}

void seed_noise(FieldState& s, double amplitude, std::uint64_t seed) {
    if (amplitude < 0) throw std::invalid_argument("seed_noise: amplitude must be >= 0");
    if (amplitude == 0) return;
    Rng rng(seed);
    const double sigma = amplitude / std::sqrt(2.0);
    for (Complex& z : s.psi) {
        const auto [g1, g2] = rng.gauss_pair();
        z += Complex{sigma * g1, sigma * g2};
    }
}

void seed_noise_harmonics(FieldState& s, const Domain& dom, double amplitude, int n_max,
                          std::uint64_t seed, double taper) {
    if (dom.kind != DomainKind::Ring1D)
        throw std::invalid_argument("seed_noise_harmonics: Ring1D only");
    if (amplitude < 0) throw std::invalid_argument("seed_noise_harmonics: amplitude >= 0");
    if (!(taper > 0)) throw std::invalid_argument("seed_noise_harmonics: taper > 0");
    if (amplitude == 0) return;
    Rng rng(seed);
    for (int n = -n_max; n <= n_max; ++n) {
        const double phase = 2.0 * std::numbers::pi * rng.uniform();
        const Complex amp =
            amplitude * std::pow(taper, std::abs(n)) * Complex{std::cos(phase), std::sin(phase)};
        for (int j = 0; j < dom.n1; ++j) {
            const double theta = dom.coord1[j] / dom.ring_radius;
            s.psi[j] += amp * Complex{std::cos(n * theta), -std::sin(n * theta)};
        }
    }
}

Complex ring_mode_amplitude(const FieldState& s, const Domain& dom, int n) {
    if (dom.kind != DomainKind::Ring1D)
        throw std::invalid_argument("ring_mode_amplitude: Ring1D only");
    Complex acc{0.0, 0.0};
    for (int j = 0; j < dom.n1; ++j) {
        const double theta = dom.coord1[j] / dom.ring_radius;
        acc += s.psi[j] * Complex{std::cos(n * theta), std::sin(n * theta)};
    }
    return acc / static_cast<double>(dom.n1);
}

int winding_number(const CField& psi, const Domain& dom) {
    if (dom.kind == DomainKind::Disc1D) return dom.winding;
    if (dom.kind != DomainKind::Ring1D)
        throw std::invalid_argument("winding_number: Ring1D or Disc1D only");
    double total = 0.0;
    for (int j = 0; j < dom.n1; ++j) {
        const Complex a = psi[j];
        const Complex b = psi[(j + 1) % dom.n1];
        if (a == Complex{0.0, 0.0} || b == Complex{0.0, 0.0})
            throw std::invalid_argument("winding_number: psi has zeros on the ring");
        total += std::arg(b / a);
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

double fit_log_slope(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size() || times.size() < 2)
        throw std::invalid_argument("fit_log_slope: need >= 2 samples");
    double st = 0, sy = 0, stt = 0, sty = 0;
    const double n = static_cast<double>(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double y = std::log(values[i]);
        st += times[i];
        sy += y;
        stt += times[i] * times[i];
        sty += times[i] * y;
    }
    return (n * sty - st * sy) / (n * stt - st * st);
}

} // namespace tdgl
