#include "tdgl/bohm.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tdgl/tdgl.hpp"

namespace tdgl {

namespace {

struct Floor {
    double rho_floor; // absolute floor on |psi|^2
    Mask mask;
};

Floor make_floor(const CField& psi, const StencilConfig& st) {
    Floor f;
    const double rho_max = max_abs2(psi);
    f.rho_floor = st.epsilon_rho * rho_max;
    f.mask.assign(psi.size(), 0);
    for (std::size_t k = 0; k < psi.size(); ++k)
        if (std::norm(psi[k]) < f.rho_floor || rho_max == 0.0) f.mask[k] = 1;
    return f;
}

void merge_mask(Mask* out, const Mask& m) {
    if (!out) return;
    if (out->empty()) { *out = m; return; }
    for (std::size_t k = 0; k < m.size(); ++k) (*out)[k] |= m[k];
}

double vdot(const VField& a, const VField& b, std::size_t k) {
    double acc = a[0][k] * b[0][k];
    if (a.ncomp == 2) acc += a[1][k] * b[1][k];
    return acc;
}

// (v . grad) v with the cylindrical correction terms on Disc1D.
VField advective_accel(const VField& v, const Domain& dom, const StencilConfig& st) {
    VField a = VField::zeros(dom);
    if (dom.kind == DomainKind::Ring1D) {
        RField dv = gradient_axis(v[0], dom, 0, st);
        for (std::size_t k = 0; k < dv.size(); ++k) a[0][k] = v[0][k] * dv[k];
        return a;
    }
    if (dom.kind == DomainKind::Disc1D) {
        RField dvr = gradient_axis(v[0], dom, 0, st);
        RField dvt = gradient_axis(v[1], dom, 0, st);
        for (int i = 0; i < dom.n1; ++i) {
            const double r = dom.r(i);
            a[0][i] = v[0][i] * dvr[i] - v[1][i] * v[1][i] / r;
            a[1][i] = v[0][i] * dvt[i] + v[0][i] * v[1][i] / r;
        }
        return a;
    }
    for (int c = 0; c < 2; ++c) {
        RField dx = gradient_axis(v[c], dom, 0, st);
        RField dy = gradient_axis(v[c], dom, 1, st);
        for (std::size_t k = 0; k < dx.size(); ++k)
            a[c][k] = v[0][k] * dx[k] + v[1][k] * dy[k];
    }
    return a;
}

} // namespace

double masked_inf_norm(const RField& f, const Mask& mask) {
    double m = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
        if (mask.empty() || !mask[k]) m = std::max(m, std::abs(f[k]));
    return m;
}

double masked_inf_norm(const VField& f, const Mask& mask) {
    double m = 0.0;
    for (int c = 0; c < f.ncomp; ++c)
        if (!f[c].empty()) m = std::max(m, masked_inf_norm(f[c], mask));
    return m;
}

RField q_stat_field(const CField& psi, const Domain& dom, const PhysParams& p,
                    const StencilConfig& st, Mask* mask) {
    Floor fl = make_floor(psi, st);
    merge_mask(mask, fl.mask);
    const double mod_floor = std::sqrt(fl.rho_floor);

    RField mod = abs_field(psi);
    // second derivatives of solver states use the wall stencil the solver saw
    RField lap = laplacian_scalar(mod, dom, st.with_mirror());
    RField out(psi.size());
    const double c = 0.5 * p.hbar * p.hbar / p.mass;
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double denom = std::max(mod[k], mod_floor > 0 ? mod_floor : 1.0);
        out[k] = p.beta * mod[k] * mod[k] - c * lap[k] / denom;
    }
    return out;
}

RField q_dyn_field(const CField& psi, const VField& A, const Domain& dom, const PhysParams& p,
                   const CField& dpsi_dt, const StencilConfig& st, Mask* mask) {
    Floor fl = make_floor(psi, st);
    merge_mask(mask, fl.mask);

    VelocityField vel = velocity_field(psi, A, dom, p, st);
    RField rho = abs2_field(psi);
    VField flux = VField::zeros(dom);
    for (int c = 0; c < flux.ncomp; ++c)
        for (std::size_t k = 0; k < rho.size(); ++k) flux[c][k] = rho[k] * vel.v[c][k];
    RField div_flux = divergence(flux, dom, st);

    RField out(psi.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double drho_dt = 2.0 * (std::conj(psi[k]) * dpsi_dt[k]).real();
        const double denom = std::max(rho[k], fl.rho_floor > 0 ? fl.rho_floor : 1.0);
        out[k] = 0.5 * p.hbar / denom * (p.gamma * drho_dt - div_flux[k] / p.gamma);
    }
    return out;
}

RField q_dep_field(const CField& psi, const VField& A, const Domain& dom, const PhysParams& p,
                   const CField& dpsi_dt, const StencilConfig& st, Mask* mask) {
    RField qs = q_stat_field(psi, dom, p, st, mask);
    RField qd = q_dyn_field(psi, A, dom, p, dpsi_dt, st, mask);
    VelocityField vel = velocity_field(psi, A, dom, p, st);

    RField out(psi.size());
    const double pref = 2.0 * (p.gamma + 1.0 / p.gamma);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double v2 = vdot(vel.v, vel.v, k);
        out[k] = pref * (qs[k] + p.alpha + 0.5 * p.mass * v2) + 2.0 * p.gamma * qd[k];
    }
    return out;
}

BohmFields force_decomposition(const FieldState& s, const Domain& dom, const PhysParams& p,
                               const StencilConfig& st) {
    BohmFields bf;
    const std::size_t n = s.psi.size();
    CField dpsi_dt = gl_rhs(s, dom, p, st);

    Floor fl = make_floor(s.psi, st);
    bf.mask = fl.mask;

    VelocityField vel = velocity_field(s.psi, s.A, dom, p, st);
    bf.v = std::move(vel.v);
    for (std::size_t k = 0; k < n; ++k) bf.mask[k] |= vel.mask[k];

    bf.q_stat = q_stat_field(s.psi, dom, p, st, nullptr);
    bf.q_dyn = q_dyn_field(s.psi, s.A, dom, p, dpsi_dt, st, nullptr);

    bf.dpsi2_dt.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        bf.dpsi2_dt[k] = 2.0 * (std::conj(s.psi[k]) * dpsi_dt[k]).real();

    const double pref = 2.0 * (p.gamma + 1.0 / p.gamma);
    bf.q_dep.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double v2 = vdot(bf.v, bf.v, k);
        bf.q_dep[k] = pref * (bf.q_stat[k] + p.alpha + 0.5 * p.mass * v2) +
                      2.0 * p.gamma * bf.q_dyn[k];
    }

    // f_quantum = -grad(q_stat + q_dyn)
    RField qsum(n);
    for (std::size_t k = 0; k < n; ++k) qsum[k] = bf.q_stat[k] + bf.q_dyn[k];
    bf.f_quantum = gradient_scalar(qsum, dom, st);
    for (int c = 0; c < bf.f_quantum.ncomp; ++c)
        for (std::size_t k = 0; k < n; ++k) bf.f_quantum[c][k] = -bf.f_quantum[c][k];

    // f_em = q (E + v x B / c)
    bf.f_em = VField::zeros(dom);
    const double qoc = p.charge / p.light_c;
    if (dom.kind == DomainKind::Ring1D) {
        for (std::size_t k = 0; k < n; ++k) bf.f_em[0][k] = p.charge * s.E[0][k];
    } else {
        // B = B_z z_hat: (v x B) = (v_2 B, -v_1 B) in (x,y) or (r,theta)
        for (std::size_t k = 0; k < n; ++k) {
            bf.f_em[0][k] = p.charge * s.E[0][k] + qoc * bf.v[1][k] * s.B[k];
            bf.f_em[1][k] = p.charge * s.E[1][k] - qoc * bf.v[0][k] * s.B[k];
        }
    }

    // accel = (v.grad)v + dv/dt, the time part assembled from gl_rhs and E
    bf.accel = advective_accel(bf.v, dom, st);
    {
        RField rho = abs2_field(s.psi);
        CField dpsi_x = gradient_axis_c(s.psi, dom, 0, st);
        CField ddot_x = gradient_axis_c(dpsi_dt, dom, 0, st);
        CField dpsi_y, ddot_y;
        if (dom.kind == DomainKind::Grid2D) {
            dpsi_y = gradient_axis_c(s.psi, dom, 1, st);
            ddot_y = gradient_axis_c(dpsi_dt, dom, 1, st);
        }
        auto dv_dt_comp = [&](int c, std::size_t k) {
            const CField& dpsi = c == 0 ? dpsi_x : dpsi_y;
            const CField& ddot = c == 0 ? ddot_x : ddot_y;
            const double denom = std::max(rho[k], fl.rho_floor > 0 ? fl.rho_floor : 1.0);
            const double j = std::imag(std::conj(s.psi[k]) * dpsi[k]);
            const double dj = std::imag(std::conj(dpsi_dt[k]) * dpsi[k]) +
                              std::imag(std::conj(s.psi[k]) * ddot[k]);
            const double drho = bf.dpsi2_dt[k];
            return (p.hbar * (dj / denom - j * drho / (denom * denom)) +
                    p.charge * s.E[c][k]) /
                   p.mass;
        };
        for (std::size_t k = 0; k < n; ++k) {
            bf.accel[0][k] += dv_dt_comp(0, k);
            if (dom.kind == DomainKind::Grid2D) bf.accel[1][k] += dv_dt_comp(1, k);
        }
        if (dom.kind == DomainKind::Disc1D) {
            // tangential velocity is algebraic in r; only A_theta moves it
            for (std::size_t k = 0; k < n; ++k)
                bf.accel[1][k] += p.charge * s.E[1][k] / p.mass;
        }
    }

    bf.newton_residual = VField::zeros(dom);
    for (int c = 0; c < bf.newton_residual.ncomp; ++c)
        for (std::size_t k = 0; k < n; ++k)
            bf.newton_residual[c][k] =
                bf.f_quantum[c][k] + bf.f_em[c][k] - p.mass * bf.accel[c][k];
    return bf;
}

RField depairing_density(const FieldState& s, const Domain& dom, const PhysParams& p,
                         const StencilConfig& st) {
    CField dpsi_dt = gl_rhs(s, dom, p, st);
    RField qd = q_dep_field(s.psi, s.A, dom, p, dpsi_dt, st, nullptr);
    RField out(qd.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = qd[k] * std::norm(s.psi[k]);
    return out;
}

RField density_identity_residual(const FieldState& s, const Domain& dom, const PhysParams& p,
                                 const StencilConfig& st) {
    const std::size_t n = s.psi.size();
    CField dpsi_dt = gl_rhs(s, dom, p, st);
    RField qdep = q_dep_field(s.psi, s.A, dom, p, dpsi_dt, st, nullptr);

    VelocityField vel = velocity_field(s.psi, s.A, dom, p, st);
    RField rho = abs2_field(s.psi);
    VField flux = VField::zeros(dom);
    for (int c = 0; c < flux.ncomp; ++c)
        for (std::size_t k = 0; k < n; ++k) flux[c][k] = rho[k] * vel.v[c][k];
    RField div_flux = divergence(flux, dom, st);

    RField res(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double drho = 2.0 * (std::conj(s.psi[k]) * dpsi_dt[k]).real();
        res[k] = drho + div_flux[k] + qdep[k] * rho[k] / p.hbar;
    }
    return res;
}

ViscousReport viscous_force_check(const FieldState& s, const Domain& dom, const PhysParams& p,
                                  const StencilConfig& st, double nonuniformity_bound) {
    ViscousReport rep;
    RField mod = abs_field(s.psi);
    double lo = mod.empty() ? 0.0 : mod[0], hi = lo;
    for (double x : mod) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    rep.nonuniformity = hi > 0 ? (hi - lo) / hi : 1.0;
    if (rep.nonuniformity > nonuniformity_bound) {
        std::ostringstream os;
        os << "viscous_force_check: |psi| nonuniformity " << rep.nonuniformity
           << " exceeds bound " << nonuniformity_bound;
        throw std::invalid_argument(os.str());
    }
    if (max_abs(s.B) > 1e-12)
        throw std::invalid_argument("viscous_force_check: needs B = 0 (curl-free v)");

    CField dpsi_dt = gl_rhs(s, dom, p, st);
    RField qdyn = q_dyn_field(s.psi, s.A, dom, p, dpsi_dt, st, nullptr);
    VField grad_qdyn = gradient_scalar(qdyn, dom, st);

    VelocityField vel = velocity_field(s.psi, s.A, dom, p, st);
    VField lap_v = laplacian_vector(vel.v, dom, st);

    const double coef = 0.5 * p.hbar / p.gamma;
    double num = 0.0, den = 0.0;
    for (int c = 0; c < lap_v.ncomp; ++c) {
        if (lap_v[c].empty() || grad_qdyn[c].empty()) continue;
        for (std::size_t k = 0; k < lap_v[c].size(); ++k) {
            if (vel.mask[k]) continue;
            num = std::max(num, std::abs(-grad_qdyn[c][k] - coef * lap_v[c][k]));
            den = std::max(den, std::abs(coef * lap_v[c][k]));
        }
    }
    rep.residual_inf = num;
    rep.viscous_inf = den;
    rep.rel_discrepancy = den > 0 ? num / den : 0.0;
    return rep;
}

StationaryReport stationary_checks(const FieldState& s, const Domain& dom, const PhysParams& p,
                                   const StencilConfig& st) {
    StationaryReport rep;
    const std::size_t n = s.psi.size();

    Floor fl = make_floor(s.psi, st);
    VelocityField vel = velocity_field(s.psi, s.A, dom, p, st);
    Mask mask = fl.mask;
    for (std::size_t k = 0; k < n; ++k) mask[k] |= vel.mask[k];
    for (std::size_t k = 0; k < n; ++k) rep.masked_nodes += mask[k];
    if (rep.masked_nodes == n) {
        rep.all_masked = true;
        return rep;
    }

    RField rho = abs2_field(s.psi);
    VField flux = VField::zeros(dom);
    for (int c = 0; c < flux.ncomp; ++c)
        for (std::size_t k = 0; k < n; ++k) flux[c][k] = rho[k] * vel.v[c][k];
    rep.continuity_inf = masked_inf_norm(divergence(flux, dom, st), mask);

    RField qs = q_stat_field(s.psi, dom, p, st, nullptr);
    RField energy(n);
    for (std::size_t k = 0; k < n; ++k)
        energy[k] = qs[k] + p.alpha + 0.5 * p.mass * vdot(vel.v, vel.v, k);
    rep.energy_inf = masked_inf_norm(energy, mask);

    // Newton law in the stationary form: a = (v.grad)v
    VField grad_qs = gradient_scalar(qs, dom, st);
    VField adv = advective_accel(vel.v, dom, st);
    VField res = VField::zeros(dom);
    const double qoc = p.charge / p.light_c;
    for (std::size_t k = 0; k < n; ++k) {
        if (dom.kind == DomainKind::Ring1D) {
            res[0][k] = -grad_qs[0][k] + p.charge * s.E[0][k] - p.mass * adv[0][k];
        } else {
            res[0][k] = -grad_qs[0][k] + p.charge * s.E[0][k] + qoc * vel.v[1][k] * s.B[k] -
                        p.mass * adv[0][k];
            res[1][k] = -grad_qs[1][k] + p.charge * s.E[1][k] - qoc * vel.v[0][k] * s.B[k] -
                        p.mass * adv[1][k];
        }
    }
    rep.newton_inf = masked_inf_norm(res, mask);
    return rep;
}

} // namespace tdgl
