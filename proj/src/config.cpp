#include "tdgl/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tdgl {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_double(const std::string& s, double& out) {
    const char* c = s.c_str();
    char* end = nullptr;
    out = std::strtod(c, &end);
    return end != c && *end == '\0';
}

bool parse_long(const std::string& s, long long& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

bool parse_bool(const std::string& s, bool& out) {
    if (s == "true" || s == "1" || s == "yes") { out = true; return true; }
    if (s == "false" || s == "0" || s == "no") { out = false; return true; }
    return false;
}

std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

// setter result: empty string on success, message otherwise
using Setter = std::function<std::string(ScenarioConfig&, const std::string&)>;

std::string set_d(double& field, const std::string& v, const std::string& what) {
    double x;
    if (!parse_double(v, x)) return what + ": expected a number, got '" + v + "'";
    field = x;
    return {};
}

std::string set_i(int& field, const std::string& v, const std::string& what) {
    long long x;
    if (!parse_long(v, x)) return what + ": expected an integer, got '" + v + "'";
    field = static_cast<int>(x);
    return {};
}

struct Schema {
    std::map<std::string, Setter> setters; // "section.key"

    void add(const std::string& key, Setter s) { setters[key] = std::move(s); }

    std::vector<std::string> keys_in_section(const std::string& section) const {
        std::vector<std::string> out;
        const std::string prefix = section + ".";
        for (const auto& [k, _] : setters)
            if (k.rfind(prefix, 0) == 0) out.push_back(k.substr(prefix.size()));
        return out;
    }
};

Schema build_schema() {
    Schema s;
    // top level
    s.add(".scenario", [](ScenarioConfig& c, const std::string& v) -> std::string {
        const auto names = known_scenarios();
        if (std::find(names.begin(), names.end(), v) == names.end())
            return "scenario: unknown scenario '" + v + "'";
        c.scenario = v;
        return {};
    });
    s.add(".seed", [](ScenarioConfig& c, const std::string& v) -> std::string {
        long long x;
        if (!parse_long(v, x) || x < 0) return "seed: expected a nonnegative integer";
        c.seed = static_cast<std::uint64_t>(x);
        return {};
    });
    s.add(".fit_t_begin", [](ScenarioConfig& c, const std::string& v) {
        return set_d(c.fit_t_begin, v, "fit_t_begin");
    });
    s.add(".fit_t_end", [](ScenarioConfig& c, const std::string& v) {
        return set_d(c.fit_t_end, v, "fit_t_end");
    });

    // params
    s.add("params.alpha", [](ScenarioConfig& c, const std::string& v) { return set_d(c.params.alpha, v, "params.alpha"); });
    s.add("params.beta", [](ScenarioConfig& c, const std::string& v) { return set_d(c.params.beta, v, "params.beta"); });
    s.add("params.gamma", [](ScenarioConfig& c, const std::string& v) { return set_d(c.params.gamma, v, "params.gamma"); });
    s.add("params.mass", [](ScenarioConfig& c, const std::string& v) { return set_d(c.params.mass, v, "params.mass"); });
    s.add("params.charge", [](ScenarioConfig& c, const std::string& v) { return set_d(c.params.charge, v, "params.charge"); });
    s.add("params.hbar", [](ScenarioConfig& c, const std::string& v) { return set_d(c.params.hbar, v, "params.hbar"); });
    s.add("params.light_c", [](ScenarioConfig& c, const std::string& v) { return set_d(c.params.light_c, v, "params.light_c"); });

    // domain
    s.add("domain.kind", [](ScenarioConfig& c, const std::string& v) -> std::string {
        if (v == "ring1d") c.domain.kind = DomainKind::Ring1D;
        else if (v == "grid2d") c.domain.kind = DomainKind::Grid2D;
        else if (v == "disc1d") c.domain.kind = DomainKind::Disc1D;
        else return "domain.kind: expected ring1d, grid2d or disc1d";
        return {};
    });
    s.add("domain.radius", [](ScenarioConfig& c, const std::string& v) { return set_d(c.domain.radius, v, "domain.radius"); });
    s.add("domain.nodes", [](ScenarioConfig& c, const std::string& v) { return set_i(c.domain.nodes, v, "domain.nodes"); });
    s.add("domain.lx", [](ScenarioConfig& c, const std::string& v) { return set_d(c.domain.lx, v, "domain.lx"); });
    s.add("domain.ly", [](ScenarioConfig& c, const std::string& v) { return set_d(c.domain.ly, v, "domain.ly"); });
    s.add("domain.nx", [](ScenarioConfig& c, const std::string& v) { return set_i(c.domain.nx, v, "domain.nx"); });
    s.add("domain.ny", [](ScenarioConfig& c, const std::string& v) { return set_i(c.domain.ny, v, "domain.ny"); });
    s.add("domain.bc_x", [](ScenarioConfig& c, const std::string& v) -> std::string {
        if (v == "periodic") c.domain.bc_x = AxisBc::Periodic;
        else if (v == "zero-current") c.domain.bc_x = AxisBc::ZeroCurrent;
        else return "domain.bc_x: expected periodic or zero-current";
        return {};
    });
    s.add("domain.bc_y", [](ScenarioConfig& c, const std::string& v) -> std::string {
        if (v == "periodic") c.domain.bc_y = AxisBc::Periodic;
        else if (v == "zero-current") c.domain.bc_y = AxisBc::ZeroCurrent;
        else return "domain.bc_y: expected periodic or zero-current";
        return {};
    });
    s.add("domain.r_min", [](ScenarioConfig& c, const std::string& v) { return set_d(c.domain.r_min, v, "domain.r_min"); });
    s.add("domain.r_max", [](ScenarioConfig& c, const std::string& v) { return set_d(c.domain.r_max, v, "domain.r_max"); });
    s.add("domain.winding", [](ScenarioConfig& c, const std::string& v) { return set_i(c.domain.winding, v, "domain.winding"); });

    // gauge
    s.add("gauge.kind", [](ScenarioConfig& c, const std::string& v) -> std::string {
        if (v == "zero") c.gauge.kind = GaugeKind::Zero;
        else if (v == "uniform-field-disc") c.gauge.kind = GaugeKind::UniformFieldDisc;
        else if (v == "ring-flux") c.gauge.kind = GaugeKind::RingFlux;
        else if (v == "uniform-field-landau") c.gauge.kind = GaugeKind::UniformFieldLandau;
        else return "gauge.kind: expected zero, uniform-field-disc, ring-flux or uniform-field-landau";
        return {};
    });
    s.add("gauge.b0", [](ScenarioConfig& c, const std::string& v) { return set_d(c.gauge.b0, v, "gauge.b0"); });
    s.add("gauge.flux_ratio", [](ScenarioConfig& c, const std::string& v) { return set_d(c.gauge.flux_ratio, v, "gauge.flux_ratio"); });
    s.add("gauge.ramp_t0", [](ScenarioConfig& c, const std::string& v) -> std::string {
        if (!c.gauge.ramp) c.gauge.ramp = GaugeRamp{};
        return set_d(c.gauge.ramp->t0, v, "gauge.ramp_t0");
    });
    s.add("gauge.ramp_t1", [](ScenarioConfig& c, const std::string& v) -> std::string {
        if (!c.gauge.ramp) c.gauge.ramp = GaugeRamp{};
        return set_d(c.gauge.ramp->t1, v, "gauge.ramp_t1");
    });

    // stencil
    s.add("stencil.order", [](ScenarioConfig& c, const std::string& v) { return set_i(c.stencil.order, v, "stencil.order"); });
    s.add("stencil.epsilon_rho", [](ScenarioConfig& c, const std::string& v) { return set_d(c.stencil.epsilon_rho, v, "stencil.epsilon_rho"); });

    // solver
    s.add("solver.dt", [](ScenarioConfig& c, const std::string& v) { return set_d(c.solver.dt, v, "solver.dt"); });
    s.add("solver.method", [](ScenarioConfig& c, const std::string& v) -> std::string {
        if (v == "rk4") c.solver.method = StepMethod::Rk4Explicit;
        else if (v == "semi-implicit") c.solver.method = StepMethod::SemiImplicit;
        else return "solver.method: expected rk4 or semi-implicit";
        return {};
    });
    s.add("solver.t_end", [](ScenarioConfig& c, const std::string& v) { return set_d(c.solver.t_end, v, "solver.t_end"); });
    s.add("solver.snapshot_stride", [](ScenarioConfig& c, const std::string& v) { return set_i(c.solver.snapshot_stride, v, "solver.snapshot_stride"); });
    s.add("solver.tol_stat", [](ScenarioConfig& c, const std::string& v) { return set_d(c.solver.tol_stat, v, "solver.tol_stat"); });
    s.add("solver.max_relax_steps", [](ScenarioConfig& c, const std::string& v) -> std::string {
        long long x;
        if (!parse_long(v, x)) return "solver.max_relax_steps: expected an integer";
        c.solver.max_relax_steps = x;
        return {};
    });

    // seed (initial condition)
    s.add("seed.kind", [](ScenarioConfig& c, const std::string& v) -> std::string {
        if (v == "none") c.seed_spec.kind = SeedSpec::Kind::None;
        else if (v == "uniform") c.seed_spec.kind = SeedSpec::Kind::Uniform;
        else if (v == "winding") c.seed_spec.kind = SeedSpec::Kind::Winding;
        else if (v == "node-noise") c.seed_spec.kind = SeedSpec::Kind::NodeNoise;
        else if (v == "harmonics") c.seed_spec.kind = SeedSpec::Kind::Harmonics;
        else return "seed.kind: expected none, uniform, winding, node-noise or harmonics";
        return {};
    });
    s.add("seed.value", [](ScenarioConfig& c, const std::string& v) { return set_d(c.seed_spec.value, v, "seed.value"); });
    s.add("seed.amplitude", [](ScenarioConfig& c, const std::string& v) { return set_d(c.seed_spec.amplitude, v, "seed.amplitude"); });
    s.add("seed.n_max", [](ScenarioConfig& c, const std::string& v) { return set_i(c.seed_spec.n_max, v, "seed.n_max"); });
    s.add("seed.taper", [](ScenarioConfig& c, const std::string& v) { return set_d(c.seed_spec.taper, v, "seed.taper"); });

    // ensemble
    s.add("ensemble.enabled", [](ScenarioConfig& c, const std::string& v) -> std::string {
        bool b;
        if (!parse_bool(v, b)) return "ensemble.enabled: expected true or false";
        c.ensemble.enabled = b;
        return {};
    });
    s.add("ensemble.particles", [](ScenarioConfig& c, const std::string& v) -> std::string {
        long long x;
        if (!parse_long(v, x) || x < 1) return "ensemble.particles: expected a positive integer";
        c.ensemble.particles = x;
        return {};
    });
    s.add("ensemble.tau", [](ScenarioConfig& c, const std::string& v) { return set_d(c.ensemble.depairing.tau, v, "ensemble.tau"); });
    s.add("ensemble.variant", [](ScenarioConfig& c, const std::string& v) -> std::string {
        if (v == "interval-cells") c.ensemble.depairing.variant = DepairingVariant::IntervalCells;
        else if (v == "fixed-cells") c.ensemble.depairing.variant = DepairingVariant::FixedCells;
        else return "ensemble.variant: expected interval-cells or fixed-cells";
        return {};
    });
    s.add("ensemble.fixed_cells", [](ScenarioConfig& c, const std::string& v) { return set_i(c.ensemble.depairing.fixed_cell_count, v, "ensemble.fixed_cells"); });
    s.add("ensemble.events_enabled", [](ScenarioConfig& c, const std::string& v) -> std::string {
        bool b;
        if (!parse_bool(v, b)) return "ensemble.events_enabled: expected true or false";
        c.ensemble.events_enabled = b;
        return {};
    });
    s.add("ensemble.trajectory_sample", [](ScenarioConfig& c, const std::string& v) { return set_i(c.ensemble.trajectory_sample, v, "ensemble.trajectory_sample"); });
    s.add("ensemble.trajectory_stride", [](ScenarioConfig& c, const std::string& v) { return set_i(c.ensemble.trajectory_stride, v, "ensemble.trajectory_stride"); });

    // output
    s.add("output.directory", [](ScenarioConfig& c, const std::string& v) -> std::string {
        if (v.empty()) return "output.directory: must not be empty";
        c.out_dir = v;
        return {};
    });
    return s;
}

const Schema& schema() {
    static const Schema s = build_schema();
    return s;
}

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
};

std::vector<Entry> tokenize(const std::string& text, std::vector<std::string>& errors) {
    std::vector<Entry> entries;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                errors.push_back("line " + std::to_string(lineno) + ": malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        entries.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno});
    }
    return entries;
}

std::string unknown_key_message(const Entry& e) {
    const std::string shown = e.section.empty() ? e.key : e.section + "." + e.key;
    std::string msg = "line " + std::to_string(e.line) + ": unknown key '" + shown + "'";
    // nearest known key in the same section
    std::size_t best = 4; // suggest only within distance 3
    std::string best_key;
    for (const std::string& k : schema().keys_in_section(e.section)) {
        const std::size_t d = levenshtein(e.key, k);
        if (d < best) { best = d; best_key = k; }
    }
    if (!best_key.empty()) msg += " (did you mean '" + best_key + "'?)";
    return msg;
}

void validate_into(const ScenarioConfig& c, std::vector<std::string>& errors) {
    auto guard = [&](auto&& fn) {
        try {
            fn();
        } catch (const std::exception& ex) {
            errors.push_back(ex.what());
        }
    };
    guard([&] { c.params.validate(); });
    guard([&] { c.stencil.validate(); });
    guard([&] { (void)make_domain(c.domain); });
    if (c.solver.dt != 0.0) guard([&] { c.solver.validate(); });
    else if (c.solver.dt < 0) errors.push_back("solver: dt must be > 0");
    if (c.ensemble.enabled) guard([&] { c.ensemble.depairing.validate(); });
    if (c.gauge.ramp && !(c.gauge.ramp->t1 > c.gauge.ramp->t0))
        errors.push_back("gauge: ramp needs t1 > t0");
}

} // namespace

std::vector<std::string> known_scenarios() {
    return {"uniform-stationary", "disc-stationary", "ring-quench", "strip-hall", "custom"};
}

ScenarioConfig scenario_defaults(const std::string& name) {
    ScenarioConfig c;
    c.scenario = name;
    if (name == "uniform-stationary") {
        c.domain.kind = DomainKind::Ring1D;
        c.domain.radius = 1.0;
        c.domain.nodes = 256;
        c.params.alpha = -1.0;
        c.gauge.kind = GaugeKind::Zero;
        c.solver.method = StepMethod::Rk4Explicit;
        c.solver.dt = 0.0; // auto
        c.solver.tol_stat = 1e-11;
        c.seed_spec = {SeedSpec::Kind::Uniform, 0.5, 0.0, 0};
    } else if (name == "disc-stationary") {
        c.domain.kind = DomainKind::Disc1D;
        c.domain.r_min = 0.75;
        c.domain.r_max = 2.0;
        c.domain.nodes = 256;
        c.domain.winding = 1;
        c.params.alpha = -5.0;
        c.gauge.kind = GaugeKind::UniformFieldDisc;
        c.gauge.b0 = 2.0;
        c.solver.method = StepMethod::SemiImplicit;
        c.solver.dt = 5e-3;
        // the residual floor of the Laplacian evaluation scales as eps/h^2;
        // 1e-9 stays reachable through the refinement ladder
        c.solver.tol_stat = 1e-9;
        c.seed_spec = {SeedSpec::Kind::Uniform, 1.0, 0.0, 0};
    } else if (name == "ring-quench") {
        c.domain.kind = DomainKind::Ring1D;
        c.domain.radius = 1.0;
        c.domain.nodes = 256;
        c.params.alpha = -0.1; // post-quench value; the run starts at t = 0+
        c.gauge.kind = GaugeKind::RingFlux;
        c.gauge.flux_ratio = 0.3;
        c.solver.method = StepMethod::Rk4Explicit;
        c.solver.dt = 0.0; // auto
        c.solver.t_end = 110.0;
        c.solver.snapshot_stride = 25000;
        c.seed_spec = {SeedSpec::Kind::Harmonics, 0.0, 1e-6, 2};
        c.fit_t_begin = 2.0;
        c.fit_t_end = 30.0;
        c.ensemble.enabled = false;
        c.ensemble.particles = 10000;
        c.ensemble.depairing.tau = 5e-2;
    } else if (name == "strip-hall") {
        c.domain.kind = DomainKind::Grid2D;
        c.domain.lx = 8.0;
        c.domain.ly = 2.0;
        c.domain.nx = 64;
        c.domain.ny = 32;
        c.domain.bc_x = AxisBc::Periodic;
        c.domain.bc_y = AxisBc::ZeroCurrent;
        c.params.alpha = -1.0;
        c.gauge.kind = GaugeKind::UniformFieldLandau;
        c.gauge.b0 = 0.1;
        c.solver.method = StepMethod::Rk4Explicit;
        c.solver.dt = 0.0; // auto
        c.solver.tol_stat = 1e-10;
        c.seed_spec = {SeedSpec::Kind::Winding, 0.8, 0.0, 1};
    } else if (name == "custom") {
        // bare defaults
    } else {
        throw std::invalid_argument("scenario: unknown scenario '" + name + "'");
    }
    return c;
}

ParseResult parse_config(const std::string& text) {
    ParseResult result;
    std::vector<Entry> entries = tokenize(text, result.errors);

    // the scenario key decides the preset the rest lands on
    std::string scenario = "custom";
    for (const Entry& e : entries)
        if (e.section.empty() && e.key == "scenario") scenario = e.value;

    ScenarioConfig cfg;
    try {
        cfg = scenario_defaults(scenario);
    } catch (const std::exception& ex) {
        result.errors.push_back(ex.what());
        return result;
    }

    for (const Entry& e : entries) {
        const auto it = schema().setters.find(e.section + "." + e.key);
        if (it == schema().setters.end()) {
            result.errors.push_back(unknown_key_message(e));
            continue;
        }
        if (std::string err = it->second(cfg, e.value); !err.empty())
            result.errors.push_back("line " + std::to_string(e.line) + ": " + err);
    }

    validate_into(cfg, result.errors);
    if (result.errors.empty()) result.config = std::move(cfg);
    return result;
}

std::string apply_override(ScenarioConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) return "override '" + assignment + "': expected key=value";
    std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    if (key.find('.') == std::string::npos) key = "." + key;
    const auto it = schema().setters.find(key);
    if (it == schema().setters.end()) return "override: unknown key '" + key + "'";
    return it->second(cfg, value);
}

} // namespace tdgl
