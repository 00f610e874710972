#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdgl/config.hpp"

namespace tdgl {

struct RunReport {
    std::filesystem::path out_dir;
    nlohmann::json manifest; // also written to out_dir / "manifest.json"
    int snapshots = 0;
};

/// Executes a scenario end to end: field evolution or relaxation, ensemble,
/// snapshot/event/trajectory export and the manifest. Deterministic given
/// (config, seed): CSV payloads are byte-identical across runs. Throws
/// std::invalid_argument on bad configuration, std::runtime_error on solver
/// failure or I/O trouble.
RunReport run_scenario(const ScenarioConfig& cfg);

struct VerifyReport {
    bool passed = false;
    std::vector<std::string> lines; // one human-readable line per check
    nlohmann::json details;
};

/// Oracle-backed verification: runs the scenario (at two resolutions where a
/// convergence slope is asserted) and compares against the closed-form
/// references. Only uniform-stationary, disc-stationary and ring-quench carry
/// an oracle; other scenarios throw std::invalid_argument.
VerifyReport verify_scenario(const ScenarioConfig& cfg);

/// Fills psi according to the seed spec (deterministic per cfg.seed).
void apply_seed(FieldState& s, const Domain& dom, const ScenarioConfig& cfg);

/// Resolves solver.dt == 0 to the automatic step for the chosen method.
double resolve_dt(const ScenarioConfig& cfg, const Domain& dom, const FieldState& s);

} // namespace tdgl
