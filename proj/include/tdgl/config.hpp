#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tdgl/domain.hpp"
#include "tdgl/ensemble.hpp"
#include "tdgl/gauge.hpp"
#include "tdgl/params.hpp"
#include "tdgl/tdgl.hpp"

namespace tdgl {

/// Initial order parameter.
struct SeedSpec {
    enum class Kind {
        None,      ///< psi = 0
        Uniform,   ///< psi = value everywhere
        Winding,   ///< value * e^{-i n theta} (ring/disc) or value * e^{i 2 pi n x / Lx} (grid)
        NodeNoise, ///< complex per-node noise of RMS `amplitude`
        Harmonics  ///< ring harmonics |n| <= n_max at |T_n| = amplitude, seeded phases
    };
    Kind kind = Kind::None;
    double value = 1.0;
    double amplitude = 0.0;
    int n_max = 0;
    double taper = 1.0; // harmonic amplitude falloff per |n|
};

struct EnsembleConfig {
    bool enabled = false;
    long particles = 10000; // initial computational particle count (sets sigma)
    DepairingConfig depairing;
    bool events_enabled = true;   // false = advection-only negative control
    int trajectory_sample = 64;   // particles echoed to trajectories.csv
    int trajectory_stride = 0;    // in check intervals; 0 = off
};

struct ScenarioConfig {
    std::string scenario = "custom"; // uniform-stationary | disc-stationary |
                                     // ring-quench | strip-hall | custom
    DomainSpec domain;
    PhysParams params;
    GaugeSchedule gauge;
    StencilConfig stencil;
    SolverConfig solver; // solver.dt == 0 requests the auto step (0.8 x limit)
    SeedSpec seed_spec;
    EnsembleConfig ensemble;
    std::uint64_t seed = 1;
    std::string out_dir = "out";

    /// Growth-rate fit window for ring-quench measurements.
    double fit_t_begin = 2.0;
    double fit_t_end = 30.0;
};

/// Preset for a named scenario. Throws std::invalid_argument on unknown names.
ScenarioConfig scenario_defaults(const std::string& name);

std::vector<std::string> known_scenarios();

struct ParseResult {
    std::optional<ScenarioConfig> config; // set only when errors is empty
    std::vector<std::string> errors;      // every problem found, not just the first
};

/// Parses the flat `key = value` format ('#' comments, [section] headers).
/// Unknown keys are errors and carry a nearest-key suggestion when one is
/// close. Values land on top of the scenario's preset defaults.
ParseResult parse_config(const std::string& text);

/// Applies one `section.key=value` override (the CLI --override flag).
/// Returns an error message, or empty on success.
std::string apply_override(ScenarioConfig& cfg, const std::string& assignment);

} // namespace tdgl
