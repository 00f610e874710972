// Acceptance suite: runs every oracle-backed criterion at its stated
// tolerance and prints one pass/fail line each. Exit status equals the number
// of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "tdgl/bohm.hpp"
#include "tdgl/io.hpp"
#include "tdgl/oracles.hpp"
#include "tdgl/rng.hpp"
#include "tdgl/scenario.hpp"

using namespace tdgl;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::filesystem::path work_dir() {
    auto p = std::filesystem::temp_directory_path() / "tdgl-acceptance";
    std::filesystem::create_directories(p);
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

double get(const nlohmann::json& j, const std::string& a, const std::string& b) {
    return j["metrics"][a][b].get<double>();
}

// ---------------------------------------------------------------------------
// C1 + C2: disc force balance against the closed-form oracle, with refinement
// ---------------------------------------------------------------------------
void criteria_disc() {
    std::vector<int> nodes{128, 256, 512};
    std::vector<double> errs;
    double extremum_offset_256 = 0, h_256 = 0;
    for (int n : nodes) {
        ScenarioConfig cfg = scenario_defaults("disc-stationary");
        cfg.domain.nodes = n;
        cfg.out_dir = (work_dir() / ("disc-" + std::to_string(n))).string();
        RunReport rep = run_scenario(cfg);
        errs.push_back(get(rep.manifest, "disc", "force_balance_sup_err"));
        if (n == 256) {
            extremum_offset_256 = get(rep.manifest, "disc", "q_stat_argmax_offset");
            h_256 = get(rep.manifest, "disc", "grid_spacing");
        }
    }
    const double slope = 0.5 * (std::log2(errs[0] / errs[1]) + std::log2(errs[1] / errs[2]));
    {
        std::ostringstream os;
        os << "sup err " << errs[1] << " at 256 nodes (<= 1e-3), slope " << slope
           << " (2.0 +- 0.3)";
        report("C1 disc force balance", errs[1] <= 1e-3 && slope >= 1.7 && slope <= 2.3,
               os.str());
    }
    {
        std::ostringstream os;
        os << "q_stat max at r = 1 +- " << extremum_offset_256 << " (h = " << h_256 << ")";
        report("C2 quantum-potential extremum", extremum_offset_256 <= h_256 + 1e-12, os.str());
    }
}

// ---------------------------------------------------------------------------
// C3: ring quench growth rates
// ---------------------------------------------------------------------------
void criterion_rates() {
    ScenarioConfig cfg = scenario_defaults("ring-quench");
    cfg.solver.t_end = 32.0;
    cfg.fit_t_begin = 2.0;
    cfg.fit_t_end = 30.0;
    cfg.solver.snapshot_stride = 1000000;
    cfg.out_dir = (work_dir() / "ring-rates").string();
    RunReport rep = run_scenario(cfg);

    bool ok = true;
    std::ostringstream os;
    for (const auto& e : rep.manifest["metrics"]["rates"]) {
        const int n = e["n"].get<int>();
        if (n < -1 || n > 1) continue;
        const double rel = e["rel_err"].get<double>();
        const double tol = n == 0 ? 1e-3 : 1e-2;
        ok = ok && rel <= tol;
        os << "n=" << n << " rel " << rel << " (<= " << tol << "); ";
    }
    report("C3 ring quench growth rates", ok, os.str());
}

// ---------------------------------------------------------------------------
// C4: ring potentials in the single-mode linear window
// ---------------------------------------------------------------------------
void criterion_potentials() {
    ScenarioConfig cfg = scenario_defaults("ring-quench");
    cfg.seed_spec.n_max = 0; // the single-mode window, seeded directly
    cfg.solver.t_end = 40.0;
    cfg.solver.snapshot_stride = 1000000;
    cfg.out_dir = (work_dir() / "ring-potentials").string();
    RunReport rep = run_scenario(cfg);
    const auto& rf = rep.manifest["metrics"]["ring_fields"];

    const double beta_max2 = rf["beta_max_abs2"].get<double>();
    const double q_dyn_dev = rf["q_dyn_sup_dev"].get<double>();
    const double q_dep_dev = rf["q_dep_sup_dev"].get<double>();
    const double q_stat = rf["q_stat_sup_abs"].get<double>();
    const double q_stat_bound = rf["q_stat_bound"].get<double>();
    const double speed_dev = rf["pair_speed_sup_dev"].get<double>();

    const bool ok = q_dyn_dev <= 0.01 * 0.055 + beta_max2 &&
                    q_dep_dev <= 0.01 * 0.11 + beta_max2 &&
                    q_stat <= q_stat_bound * (1.0 + 1e-12) && // round-off slack only
                    speed_dev <= 1e-6;
    std::ostringstream os;
    os << "Q_dyn dev " << q_dyn_dev << ", Q_dep dev " << q_dep_dev << ", |Q_stat| " << q_stat
       << " <= " << q_stat_bound << ", speed dev " << speed_dev << " (<= 1e-6)";
    report("C4 ring potentials", ok, os.str());
}

// ---------------------------------------------------------------------------
// C5: master density identity under refinement at random quench instants
// ---------------------------------------------------------------------------
void criterion_density_identity() {
    // 20 seeded random instants on the quarter-unit grid in [1, 25]
    Rng rng(2024);
    std::vector<double> instants;
    while (instants.size() < 20) {
        const double t = 1.0 + 0.25 * static_cast<int>(rng.uniform() * 96);
        bool dup = false;
        for (double x : instants) dup = dup || x == t;
        if (!dup) instants.push_back(t);
    }
    std::sort(instants.begin(), instants.end());

    PhysParams p;
    p.alpha = -0.1;
    p.charge = -1.0;
    GaugeSchedule g;
    g.kind = GaugeKind::RingFlux;
    g.flux_ratio = 0.3;
    StencilConfig st;

    auto errors_at = [&](int n) {
        DomainSpec ds;
        ds.kind = DomainKind::Ring1D;
        ds.nodes = n;
        Domain d = make_domain(ds);
        FieldState s = make_state(d, g, p);
        seed_noise_harmonics(s, d, 1e-2, 4, 2024);
        SolverConfig cfg;
        const long k = std::lround(std::ceil(0.25 / (0.8 * stability_limit(d, p, s))));
        cfg.dt = 0.25 / static_cast<double>(k); // steps land on the instants exactly
        Stepper stepper(d, p, cfg, g, st);
        std::vector<double> errs;
        std::size_t next = 0;
        long step = 0;
        while (next < instants.size()) {
            stepper.step(s);
            ++step;
            const double t = step * cfg.dt;
            if (std::abs(t - instants[next]) < 0.5 * cfg.dt) {
                errs.push_back(max_abs(density_identity_residual(s, d, p, st)));
                ++next;
            }
        }
        return errs;
    };

    const std::vector<double> e1 = errors_at(128);
    const std::vector<double> e2 = errors_at(256);
    const std::vector<double> e3 = errors_at(512);
    double slope_sum = 0, slope_min = 1e30, slope_max = -1e30;
    for (std::size_t i = 0; i < instants.size(); ++i) {
        const double s = 0.5 * (std::log2(e1[i] / e2[i]) + std::log2(e2[i] / e3[i]));
        slope_sum += s;
        slope_min = std::min(slope_min, s);
        slope_max = std::max(slope_max, s);
    }
    const double mean = slope_sum / instants.size();
    std::ostringstream os;
    os << "mean slope " << mean << " over 20 instants (min " << slope_min << ", max "
       << slope_max << "), want 2.0 +- 0.3";
    report("C5 master density identity", mean >= 1.7 && mean <= 2.3, os.str());
}

// ---------------------------------------------------------------------------
// C6 + C9: beable tracking through saturation, negative control, determinism
// ---------------------------------------------------------------------------
ScenarioConfig tracking_config() {
    ScenarioConfig cfg = scenario_defaults("ring-quench");
    cfg.domain.nodes = 128;
    cfg.seed_spec = {SeedSpec::Kind::Harmonics, 0.0, 3e-2, 1, 1.0};
    cfg.solver.t_end = 90.0;
    cfg.solver.snapshot_stride = 1000000;
    cfg.fit_t_begin = 1.0;
    cfg.fit_t_end = 20.0;
    cfg.ensemble.enabled = true;
    cfg.ensemble.particles = 10000;
    cfg.ensemble.depairing.tau = 0.05;
    cfg.seed = 12345;
    return cfg;
}

void criterion_tracking() {
    ScenarioConfig cfg = tracking_config();
    cfg.out_dir = (work_dir() / "tracking").string();
    RunReport rep = run_scenario(cfg);
    const auto& e = rep.manifest["metrics"]["ensemble"];
    const double z = e["density_z_sup"].get<double>();
    const double sup = e["density_sup_rel_dev"].get<double>();

    ScenarioConfig neg = tracking_config();
    neg.ensemble.events_enabled = false;
    neg.out_dir = (work_dir() / "tracking-negative").string();
    RunReport nrep = run_scenario(neg);
    const double zneg = nrep.manifest["metrics"]["ensemble"]["density_z_sup"].get<double>();

    std::ostringstream os;
    os << "sup dev/noise z = " << z << " (<= 3); advection-only control z = " << zneg
       << " (> 3); count " << e["final_count"].get<long>() << " of "
       << e["expected_count"].get<double>() << " expected, sup rel dev " << sup;
    report("C6 beable density tracking", z <= 3.0 && zneg > 3.0, os.str());
}

void criterion_determinism() {
    ScenarioConfig cfg = tracking_config();
    cfg.out_dir = (work_dir() / "tracking-rerun").string();
    run_scenario(cfg);
    const std::string a = slurp(work_dir() / "tracking" / "events.csv");
    const std::string b = slurp(work_dir() / "tracking-rerun" / "events.csv");
    std::ostringstream os;
    os << "event logs " << a.size() << " bytes, byte-identical across reruns: "
       << (a == b ? "yes" : "NO");
    report("C9 determinism", !a.empty() && a == b, os.str());
}

// ---------------------------------------------------------------------------
// C7: stationary silence and the Hall diagnostic
// ---------------------------------------------------------------------------
void criterion_silence() {
    long total_events = -1, checks = 0;
    bool silent = true;
    for (auto variant : {DepairingVariant::IntervalCells, DepairingVariant::FixedCells}) {
        ScenarioConfig cfg = scenario_defaults("uniform-stationary");
        cfg.solver.t_end = 10.5; // > 1000 intervals of tau ~ 0.01
        cfg.ensemble.enabled = true;
        cfg.ensemble.particles = 10000;
        cfg.ensemble.depairing.tau = 0.01;
        cfg.ensemble.depairing.variant = variant;
        cfg.ensemble.depairing.fixed_cell_count = 16;
        cfg.out_dir =
            (work_dir() / (variant == DepairingVariant::IntervalCells ? "silence-interval"
                                                                      : "silence-fixed"))
                .string();
        RunReport rep = run_scenario(cfg);
        const auto& e = rep.manifest["metrics"]["ensemble"];
        total_events = std::max(total_events, e["events_total"].get<long>());
        checks = e["checks"].get<long>();
        silent = silent && e["events_total"].get<long>() == 0;
    }

    ScenarioConfig strip = scenario_defaults("strip-hall");
    strip.out_dir = (work_dir() / "strip-hall").string();
    RunReport rep = run_scenario(strip);
    const double e_force = get(rep.manifest, "hall", "electric_force_inf");
    const double balance = get(rep.manifest, "hall", "lorentz_quantum_balance_inf");

    std::ostringstream os;
    os << total_events << " events over " << checks
       << " stationary intervals (both variants); |qE| = " << e_force
       << ", Lorentz vs quantum-force imbalance " << balance << " (<= 1e-3)";
    report("C7 stationary silence + Hall balance",
           silent && checks >= 1000 && e_force == 0.0 && balance <= 1e-3, os.str());
}

// ---------------------------------------------------------------------------
// C8: viscous limit of the dynamic quantum force
// ---------------------------------------------------------------------------
void criterion_viscous() {
    PhysParams p;
    p.alpha = -0.1;
    StencilConfig st;
    GaugeSchedule g; // zero field: curl-free v
    auto check_at = [&](int n) {
        DomainSpec ds;
        ds.kind = DomainKind::Ring1D;
        ds.nodes = n;
        Domain d = make_domain(ds);
        FieldState s = make_state(d, g, p);
        const double eps = 1e-6;
        for (int j = 0; j < d.n1; ++j) {
            const double phi = eps * std::sin(3.0 * d.coord1[j]);
            s.psi[j] = Complex{std::cos(phi), std::sin(phi)};
        }
        return viscous_force_check(s, d, p, st).rel_discrepancy;
    };
    const double e256 = check_at(256);
    const double e512 = check_at(512);
    const double e1024 = check_at(1024);
    const double slope = 0.5 * (std::log2(e256 / e512) + std::log2(e512 / e1024));
    std::ostringstream os;
    os << "relative discrepancy " << e512 << " at 512 nodes (<= 1e-3), slope " << slope
       << " (2.0 +- 0.3)";
    report("C8 viscous limit", e512 <= 1e-3 && slope >= 1.7 && slope <= 2.3, os.str());
}

} // namespace

int main() {
    std::printf("acceptance: de Broglie-Bohm pair trajectories for the TDGL equation\n");
    criteria_disc();        // C1, C2
    criterion_rates();      // C3
    criterion_potentials(); // C4
    criterion_density_identity(); // C5
    criterion_tracking();   // C6
    criterion_silence();    // C7
    criterion_viscous();    // C8
    criterion_determinism(); // C9 (reuses the C6 run)
    std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
