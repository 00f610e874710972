#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tdgl/io.hpp"
#include "tdgl/scenario.hpp"

using namespace tdgl;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("uniform-stationary run produces the condensate and its files") {
    ScenarioConfig cfg = scenario_defaults("uniform-stationary");
    cfg.domain.nodes = 64;
    cfg.out_dir = "/tmp/tdgl-test-uniform";
    RunReport rep = run_scenario(cfg);
    CHECK(rep.snapshots == 1);
    CHECK(std::filesystem::exists(rep.out_dir / "fields_000000.csv"));
    CHECK(std::filesystem::exists(rep.out_dir / "manifest.json"));
    const auto& m = rep.manifest["metrics"];
    CHECK(m["relax"]["residual"].get<double>() <= cfg.solver.tol_stat);
    CHECK(m["stationary"]["continuity_inf"].get<double>() < 1e-9);
    CHECK(m["stationary"]["energy_inf"].get<double>() < 1e-9);
}

TEST_CASE("snapshot CSV round-trips byte-identically") {
    ScenarioConfig cfg = scenario_defaults("uniform-stationary");
    cfg.domain.nodes = 64;
    cfg.out_dir = "/tmp/tdgl-test-roundtrip";
    RunReport rep = run_scenario(cfg);
    const auto path = rep.out_dir / "fields_000000.csv";
    CsvData data = read_csv(path);
    const auto copy = rep.out_dir / "fields_copy.csv";
    write_csv(copy, data);
    CHECK(slurp(path) == slurp(copy));
    CHECK(data.header.size() == 9); // node_index,x,re,im,abs2,vx,q_stat,q_dyn,q_dep
}

TEST_CASE("identical config and seed reproduce identical payloads") {
    ScenarioConfig cfg = scenario_defaults("ring-quench");
    cfg.domain.nodes = 64;
    cfg.solver.t_end = 2.0;
    cfg.solver.snapshot_stride = 2000;
    cfg.ensemble.enabled = true;
    cfg.ensemble.particles = 1000;
    cfg.ensemble.depairing.tau = 0.05;
    cfg.seed = 31;

    ScenarioConfig a = cfg;
    a.out_dir = "/tmp/tdgl-test-repro-a";
    ScenarioConfig b = cfg;
    b.out_dir = "/tmp/tdgl-test-repro-b";
    RunReport ra = run_scenario(a);
    RunReport rb = run_scenario(b);

    CHECK(slurp(ra.out_dir / "fields_000000.csv") == slurp(rb.out_dir / "fields_000000.csv"));
    CHECK(slurp(ra.out_dir / "events.csv") == slurp(rb.out_dir / "events.csv"));

    // manifests agree modulo the timestamp
    nlohmann::json ma = ra.manifest, mb = rb.manifest;
    ma.erase("timestamp");
    mb.erase("timestamp");
    CHECK(ma == mb);
}

TEST_CASE("strip-hall: no electric force, Lorentz balanced by the quantum force") {
    ScenarioConfig cfg = scenario_defaults("strip-hall");
    cfg.domain.nx = 32;
    cfg.domain.ny = 16;
    cfg.out_dir = "/tmp/tdgl-test-strip";
    RunReport rep = run_scenario(cfg);
    const auto& hall = rep.manifest["metrics"]["hall"];
    CHECK(hall["electric_force_inf"].get<double>() == 0.0);
    CHECK(hall["lorentz_quantum_balance_inf"].get<double>() < 1e-3);
    CHECK(rep.manifest["metrics"]["stationary"]["masked_nodes"].get<int>() == 0);
}

TEST_CASE("disc verify: oracle force balance and second-order refinement") {
    // the 1e-3 force-balance bound is stated at 256 radial nodes
    ScenarioConfig cfg = scenario_defaults("disc-stationary");
    cfg.out_dir = "/tmp/tdgl-test-disc-verify";
    VerifyReport rep = verify_scenario(cfg);
    for (const auto& line : rep.lines) INFO(line);
    CHECK(rep.passed);
}

TEST_CASE("verify rejects scenarios without an oracle") {
    ScenarioConfig cfg = scenario_defaults("custom");
    CHECK_THROWS_AS(verify_scenario(cfg), std::invalid_argument);
    ScenarioConfig strip = scenario_defaults("strip-hall");
    CHECK_THROWS_AS(verify_scenario(strip), std::invalid_argument);
}

TEST_CASE("auto dt stays under the stability limit") {
    ScenarioConfig cfg = scenario_defaults("ring-quench");
    const Domain dom = make_domain(cfg.domain);
    FieldState s = make_state(dom, cfg.gauge, cfg.params, 0.0);
    apply_seed(s, dom, cfg);
    const double dt = resolve_dt(cfg, dom, s);
    CHECK(dt > 0.0);
    CHECK(dt <= stability_limit(dom, cfg.params, s));
}

TEST_CASE("ring-quench manifest carries the measured rates and potentials") {
    ScenarioConfig cfg = scenario_defaults("ring-quench");
    cfg.domain.nodes = 96;
    cfg.solver.t_end = 30.0;
    cfg.fit_t_begin = 2.0;
    cfg.fit_t_end = 28.0;
    cfg.solver.snapshot_stride = 1000000;
    cfg.out_dir = "/tmp/tdgl-test-ring-manifest";
    RunReport rep = run_scenario(cfg);
    const auto& rates = rep.manifest["metrics"]["rates"];
    bool saw_dominant = false;
    for (const auto& e : rates) {
        if (e["n"].get<int>() == 0) {
            saw_dominant = true;
            CHECK(e["rel_err"].get<double>() < 1e-3);
        }
    }
    CHECK(saw_dominant);
    CHECK(rep.manifest["metrics"]["ring_fields"]["oracle_q_dyn"].get<double>() ==
          doctest::Approx(0.055));
    CHECK(rep.manifest["metrics"]["winding"].get<int>() == 0);
}

TEST_CASE("disc relaxation conserves the winding and exports trajectories") {
    ScenarioConfig cfg = scenario_defaults("disc-stationary");
    cfg.domain.nodes = 128;
    cfg.out_dir = "/tmp/tdgl-test-disc-winding";
    RunReport rep = run_scenario(cfg);
    CHECK(rep.manifest["metrics"]["winding"].get<int>() == 1);

    ScenarioConfig ring = scenario_defaults("ring-quench");
    ring.domain.nodes = 64;
    ring.solver.t_end = 1.0;
    ring.solver.snapshot_stride = 1000000;
    ring.ensemble.enabled = true;
    ring.ensemble.particles = 500;
    ring.ensemble.depairing.tau = 0.05;
    ring.ensemble.trajectory_stride = 2;
    ring.ensemble.trajectory_sample = 16;
    ring.out_dir = "/tmp/tdgl-test-traj";
    run_scenario(ring);
    CsvData traj = read_csv("/tmp/tdgl-test-traj/trajectories.csv");
    CHECK(traj.header.size() == 3); // t, id, x
    CHECK(traj.rows.size() > 16);
}
