#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tdgl/bohm.hpp"
#include "tdgl/oracles.hpp"
#include "tdgl/tdgl.hpp"

using namespace tdgl;

namespace {

Domain ring(int n, double radius = 1.0) {
    DomainSpec s;
    s.kind = DomainKind::Ring1D;
    s.radius = radius;
    s.nodes = n;
    return make_domain(s);
}

GaugeSchedule flux(double ratio) {
    GaugeSchedule g;
    g.kind = GaugeKind::RingFlux;
    g.flux_ratio = ratio;
    return g;
}

} // namespace

TEST_CASE("gl_rhs vanishes on the uniform condensate and on zero") {
    Domain d = ring(64);
    PhysParams p;
    p.alpha = -1.0;
    StencilConfig st;
    GaugeSchedule g; // zero
    FieldState s = make_state(d, g, p);

    CHECK(residual_inf(s, d, p, st) == 0.0); // psi = 0

    const double mod = std::sqrt(-p.alpha / p.beta);
    for (auto& z : s.psi) z = Complex{mod, 0.0};
    CHECK(residual_inf(s, d, p, st) < 1e-14);
}

TEST_CASE("gl_rhs on a tiny single harmonic is lambda_n psi") {
    Domain d = ring(256);
    PhysParams p;
    p.alpha = -0.1;
    StencilConfig st;
    GaugeSchedule g = flux(0.3);
    FieldState s = make_state(d, g, p);
    const double eps = 1e-8;
    for (int j = 0; j < d.n1; ++j) {
        const double th = d.coord1[j];
        s.psi[j] = eps * Complex{std::cos(th), -std::sin(th)}; // n = 1
    }
    RingOracle oracle(1.0, 0.3, p);
    CField rhs = gl_rhs(s, d, p, st);
    const double lam = oracle.lambda(1);
    // relative error: nonlinear term eps^2 beta/|alpha lambda| plus O(h^2) dispersion
    const double tol = eps * eps * p.beta / std::abs(p.alpha * lam) + 2.0 * d.h1 * d.h1;
    for (int j = 0; j < d.n1; ++j)
        CHECK(std::abs(rhs[j] - lam * s.psi[j]) <= tol * std::abs(lam * s.psi[j]));
}

TEST_CASE("step: stationary state is unchanged, dominant mode grows exactly") {
    Domain d = ring(128);
    PhysParams p;
    p.alpha = -0.1;
    StencilConfig st;
    GaugeSchedule g = flux(0.3);
    SolverConfig cfg;
    cfg.dt = 4e-4;

    // uniform stationary state of the fluxed ring: beta|psi|^2 = -alpha - (hbar Phi/R Phi_0)^2/2m
    FieldState s = make_state(d, g, p);
    const double mod2 = (-p.alpha - 0.5 * 0.3 * 0.3) / p.beta;
    for (auto& z : s.psi) z = Complex{std::sqrt(mod2), 0.0};
    Stepper stepper(d, p, cfg, g, st);
    FieldState before = s;
    stepper.step(s);
    for (int j = 0; j < d.n1; ++j) CHECK(std::abs(s.psi[j] - before.psi[j]) < 1e-12);

    // tiny n=0 mode multiplies by e^{lambda_0 dt} to integrator accuracy
    FieldState lin = make_state(d, g, p);
    for (auto& z : lin.psi) z = Complex{1e-8, 0.0};
    const Complex t0_before = ring_mode_amplitude(lin, d, 0);
    stepper.step(lin);
    const Complex t0_after = ring_mode_amplitude(lin, d, 0);
    RingOracle oracle(1.0, 0.3, p);
    const double growth = std::abs(t0_after / t0_before);
    CHECK(growth == doctest::Approx(std::exp(oracle.lambda(0) * cfg.dt)).epsilon(1e-12));
}

TEST_CASE("step: quench growth is monotone in the linear window") {
    Domain d = ring(96);
    PhysParams p;
    p.alpha = -0.1;
    StencilConfig st;
    GaugeSchedule g = flux(0.3);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    FieldState s = make_state(d, g, p);
    seed_noise_harmonics(s, d, 1e-6, 2, 42);
    Stepper stepper(d, p, cfg, g, st);
    // the dominant harmonic grows monotonically while beta |psi|^2 << |alpha|
    double prev = std::abs(ring_mode_amplitude(s, d, 0));
    for (int it = 0; it < 200; ++it) {
        stepper.step(s);
        if (it % 20 != 19) continue;
        const double cur = std::abs(ring_mode_amplitude(s, d, 0));
        CHECK(cur > prev);
        CHECK(p.beta * max_abs2(s.psi) < 0.01 * std::abs(p.alpha));
        prev = cur;
    }
}

TEST_CASE("relax: uniform fixed point and the normal state") {
    Domain d = ring(64);
    PhysParams p;
    p.alpha = -1.0;
    StencilConfig st;
    GaugeSchedule g;
    SolverConfig cfg;
    cfg.dt = 0.8 * 2.785 / (0.5 * 4.0 / (d.h1 * d.h1) + 2.0);
    cfg.tol_stat = 1e-11;
    cfg.max_relax_steps = 2000000;

    FieldState s = make_state(d, g, p);
    for (auto& z : s.psi) z = Complex{0.5, 0.0};
    RelaxReport rep = relax_to_stationary(s, d, p, cfg, g, st);
    CHECK(rep.residual <= cfg.tol_stat);
    for (auto& z : s.psi) CHECK(std::norm(z) == doctest::Approx(1.0).epsilon(1e-9));

    // alpha > 0: the only stationary state is psi = 0
    PhysParams pn = p;
    pn.alpha = 0.5;
    FieldState sn = make_state(d, g, pn);
    for (auto& z : sn.psi) z = Complex{0.3, 0.1};
    relax_to_stationary(sn, d, pn, cfg, g, st);
    CHECK(max_abs2(sn.psi) < 1e-10);
}

TEST_CASE("relax: reports non-convergence instead of looping") {
    Domain d = ring(64);
    PhysParams p;
    p.alpha = -1.0;
    StencilConfig st;
    GaugeSchedule g;
    SolverConfig cfg;
    cfg.dt = 1e-4;
    cfg.tol_stat = 1e-30; // unreachable
    cfg.max_relax_steps = 2000;
    FieldState s = make_state(d, g, p);
    for (auto& z : s.psi) z = Complex{0.5, 0.0};
    CHECK_THROWS_AS(relax_to_stationary(s, d, p, cfg, g, st), std::runtime_error);
}

TEST_CASE("relax: explicit stepping rejects dt above the stability limit") {
    Domain d = ring(64);
    PhysParams p;
    StencilConfig st;
    GaugeSchedule g;
    FieldState s = make_state(d, g, p);
    SolverConfig cfg;
    cfg.dt = 10.0 * stability_limit(d, p, s);
    CHECK_THROWS_AS(relax_to_stationary(s, d, p, cfg, g, st), std::invalid_argument);
}

TEST_CASE("step: instability is detected and reported") {
    Domain d = ring(64);
    PhysParams p;
    p.alpha = -1.0;
    StencilConfig st;
    GaugeSchedule g;
    SolverConfig cfg;
    cfg.dt = 50.0; // far beyond any stability bound
    FieldState s = make_state(d, g, p);
    seed_noise(s, 0.1, 3);
    Stepper stepper(d, p, cfg, g, st);
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 500; ++i) stepper.step(s);
        }(),
        std::runtime_error);
}

TEST_CASE("seed_noise: determinism and amplitude contract") {
    Domain d = ring(64);
    PhysParams p;
    GaugeSchedule g;
    FieldState a = make_state(d, g, p);
    FieldState b = make_state(d, g, p);
    seed_noise(a, 0.0, 5);
    for (auto& z : a.psi) CHECK(z == Complex{0.0, 0.0});

    seed_noise(a, 1e-3, 5);
    seed_noise(b, 1e-3, 5);
    for (int j = 0; j < d.n1; ++j) CHECK(a.psi[j] == b.psi[j]);

    FieldState c = make_state(d, g, p);
    seed_noise(c, 1e-3, 6);
    bool differs = false;
    for (int j = 0; j < d.n1; ++j) differs = differs || c.psi[j] != a.psi[j];
    CHECK(differs);
}

TEST_CASE("seed_noise_harmonics: every seeded harmonic starts at the amplitude") {
    Domain d = ring(128);
    PhysParams p;
    GaugeSchedule g;
    FieldState s = make_state(d, g, p);
    const double a = 2.5e-4;
    seed_noise_harmonics(s, d, a, 3, 11);
    for (int n = -3; n <= 3; ++n)
        CHECK(std::abs(ring_mode_amplitude(s, d, n)) == doctest::Approx(a).epsilon(1e-12));
    CHECK(std::abs(ring_mode_amplitude(s, d, 5)) < 1e-18);

    // the seeded spectrum is resolution independent
    Domain d2 = ring(64);
    FieldState s2 = make_state(d2, g, p);
    seed_noise_harmonics(s2, d2, a, 3, 11);
    for (int n = -3; n <= 3; ++n)
        CHECK(std::abs(ring_mode_amplitude(s2, d2, n) - ring_mode_amplitude(s, d, n)) < 1e-15);

    // tapered variant scales per |n|
    FieldState s3 = make_state(d, g, p);
    seed_noise_harmonics(s3, d, a, 2, 11, 0.5);
    CHECK(std::abs(ring_mode_amplitude(s3, d, 2)) == doctest::Approx(0.25 * a).epsilon(1e-10));
}

TEST_CASE("imaginary- and real-part identities hold at O(h^2) on a quench state") {
    PhysParams p;
    p.alpha = -0.1;
    StencilConfig st;
    GaugeSchedule g = flux(0.3);

    auto residuals = [&](int n) {
        Domain d = ring(n);
        FieldState s = make_state(d, g, p);
        seed_noise_harmonics(s, d, 1e-2, 4, 21);
        SolverConfig cfg;
        cfg.dt = 0.5 * stability_limit(d, p, s);
        Stepper stepper(d, p, cfg, g, st);
        while (s.t < 5.0) stepper.step(s);

        CField dpsi = gl_rhs(s, d, p, st);
        RField rho = abs2_field(s.psi);
        VelocityField vel = velocity_field(s.psi, s.A, d, p, st);
        VField fluxv = VField::zeros(d);
        for (int j = 0; j < d.n1; ++j) fluxv[0][j] = rho[j] * vel.v[0][j];
        RField div = divergence(fluxv, d, st);

        double im_res = 0.0, re_res = 0.0;
        RField qs = q_stat_field(s.psi, d, p, st, nullptr);
        for (int j = 0; j < d.n1; ++j) {
            const double im_rhs = 2.0 * p.gamma * std::imag(std::conj(s.psi[j]) * dpsi[j]);
            im_res = std::max(im_res, std::abs(div[j] - im_rhs));
            const double drho = 2.0 * std::real(std::conj(s.psi[j]) * dpsi[j]);
            const double re =
                -qs[j] - p.alpha - 0.5 * p.mass * vel.v[0][j] * vel.v[0][j] -
                0.5 * p.gamma * p.hbar * drho / rho[j];
            re_res = std::max(re_res, std::abs(re));
        }
        return std::pair{im_res, re_res};
    };

    auto [im1, re1] = residuals(64);
    auto [im2, re2] = residuals(128);
    CHECK(std::log2(im1 / im2) == doctest::Approx(2.0).epsilon(0.25));
    CHECK(std::log2(re1 / re2) == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("step-size halving improves the end state at the integrator order") {
    Domain d = ring(48);
    PhysParams p;
    p.alpha = -0.5;
    StencilConfig st;
    GaugeSchedule g = flux(0.2);

    auto run = [&](double dt) {
        FieldState s = make_state(d, g, p);
        seed_noise_harmonics(s, d, 0.05, 2, 9);
        SolverConfig cfg;
        cfg.dt = dt;
        Stepper stepper(d, p, cfg, g, st);
        const long n = std::lround(1.0 / dt);
        for (long i = 0; i < n; ++i) stepper.step(s);
        return s.psi;
    };

    CField ref = run(1.25e-4);
    auto err = [&](const CField& a) {
        double m = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - ref[k]));
        return m;
    };
    const double e1 = err(run(4e-3));
    const double e2 = err(run(2e-3));
    const double order = std::log2(e1 / e2);
    CHECK(order > 3.0); // nominal 4
}

TEST_CASE("semi-implicit stepping shares the fixed point and tracks rk4") {
    Domain d = ring(64);
    PhysParams p;
    p.alpha = -1.0;
    StencilConfig st;
    GaugeSchedule g = flux(0.1);

    // relax with the semi-implicit method: same uniform fixed point
    SolverConfig cfg;
    cfg.method = StepMethod::SemiImplicit;
    cfg.dt = 0.05;
    cfg.tol_stat = 1e-11;
    FieldState s = make_state(d, g, p);
    for (auto& z : s.psi) z = Complex{0.4, 0.0};
    RelaxReport rep = relax_to_stationary(s, d, p, cfg, g, st);
    CHECK(rep.residual <= cfg.tol_stat);
    const double expect = (-p.alpha - 0.5 * 0.1 * 0.1) / p.beta;
    for (auto& z : s.psi) CHECK(std::norm(z) == doctest::Approx(expect).epsilon(1e-8));

    // one coarse IMEX step stays within O(dt) of an accurate reference
    FieldState im = make_state(d, g, p);
    seed_noise_harmonics(im, d, 0.05, 2, 13);
    FieldState rk = im;
    SolverConfig ci;
    ci.method = StepMethod::SemiImplicit;
    ci.dt = 1e-3;
    Stepper si(d, p, ci, g, st);
    si.step(im);
    SolverConfig cr;
    cr.dt = 1e-5;
    Stepper r4(d, p, cr, g, st);
    for (int i = 0; i < 100; ++i) r4.step(rk);
    double diff = 0.0;
    for (std::size_t k = 0; k < im.psi.size(); ++k)
        diff = std::max(diff, std::abs(im.psi[k] - rk.psi[k]));
    CHECK(diff < 5.0 * ci.dt * 0.1); // first-order in dt with a small constant
}

TEST_CASE("winding number measurement") {
    Domain d = ring(64);
    CField psi(d.node_count());
    for (int j = 0; j < d.n1; ++j) {
        const double th = d.coord1[j];
        psi[j] = Complex{std::cos(2 * th), std::sin(2 * th)};
    }
    CHECK(winding_number(psi, d) == 2);
    for (int j = 0; j < d.n1; ++j) {
        const double th = d.coord1[j];
        psi[j] = 0.3 * Complex{std::cos(th), -std::sin(th)};
    }
    CHECK(winding_number(psi, d) == -1);
}

TEST_CASE("order-4 stencils sharpen the dispersion of gl_rhs") {
    Domain d = ring(64);
    PhysParams p;
    p.alpha = -0.1;
    GaugeSchedule g = flux(0.3);
    FieldState s = make_state(d, g, p);
    const double eps = 1e-8;
    for (int j = 0; j < d.n1; ++j) {
        const double th = d.coord1[j];
        s.psi[j] = eps * Complex{std::cos(th), -std::sin(th)};
    }
    RingOracle oracle(1.0, 0.3, p);
    const double lam = oracle.lambda(1);
    auto dispersion = [&](int order) {
        StencilConfig st;
        st.order = order;
        CField rhs = gl_rhs(s, d, p, st);
        double m = 0.0;
        for (int j = 0; j < d.n1; ++j)
            m = std::max(m, std::abs(rhs[j] - lam * s.psi[j]) / std::abs(lam * s.psi[j]));
        return m;
    };
    const double e2 = dispersion(2);
    const double e4 = dispersion(4);
    CHECK(e4 < e2 / 50.0); // h^4 against h^2 at this resolution
}

TEST_CASE("a ramped gauge is refreshed along the steps") {
    Domain d = ring(64);
    PhysParams p;
    p.alpha = -1.0;
    StencilConfig st;
    GaugeSchedule g = flux(0.5);
    g.ramp = GaugeRamp{0.0, 1.0};
    SolverConfig cfg;
    cfg.dt = 1e-3;
    FieldState s = make_state(d, g, p, 0.0);
    for (auto& z : s.psi) z = Complex{1.0, 0.0};
    CHECK(s.A[0][0] == 0.0); // ramp starts at zero
    Stepper stepper(d, p, cfg, g, st);
    for (int i = 0; i < 500; ++i) stepper.step(s);
    CHECK(s.t == doctest::Approx(0.5).epsilon(1e-12));
    // mid-ramp: A is partially on and E is nonzero
    const double a_full = 0.5 * p.flux_quantum() / d.len1;
    CHECK(s.A[0][0] == doctest::Approx(0.5 * a_full).epsilon(1e-6));
    CHECK(std::abs(s.E[0][0]) > 0.0);
}
