// tdglb: runs, verifies and lists the built-in superconductor trajectory
// scenarios. Exit status: 0 success, 1 validation error, 2 runtime failure,
// 3 verification failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tdgl/config.hpp"
#include "tdgl/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitVerification = 3;

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot read config file '" + path + "'");
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::vector<std::string> overrides;
};

// Loads the config file (or the named scenario's defaults), applies CLI
// overrides, and prints every collected problem on failure.
int load_config(const CommonOpts& opts, tdgl::ScenarioConfig& out) {
    tdgl::ParseResult parsed;
    if (!opts.config_path.empty()) {
        parsed = tdgl::parse_config(read_file(opts.config_path));
    } else {
        parsed.config = tdgl::scenario_defaults("custom");
    }
    if (!parsed.errors.empty()) {
        for (const std::string& e : parsed.errors) std::cerr << "config error: " << e << '\n';
        return kExitValidation;
    }
    out = *parsed.config;
    for (const std::string& ov : opts.overrides) {
        if (std::string err = tdgl::apply_override(out, ov); !err.empty()) {
            std::cerr << "config error: " << err << '\n';
            return kExitValidation;
        }
    }
    if (!opts.out_dir.empty()) out.out_dir = opts.out_dir;
    if (opts.seed_set) out.seed = opts.seed;
    return kExitOk;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "scenario configuration file");
    cmd->add_option("--out", opts.out_dir, "output directory (overrides the config)");
    cmd->add_option("--seed", opts.seed, "random seed (overrides the config)")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--override", opts.overrides,
                    "override a config key, e.g. --override solver.dt=1e-4")
        ->take_all();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"de Broglie-Bohm pair trajectories for the time-dependent "
                 "Ginzburg-Landau equation"};
    app.require_subcommand(1);

    CommonOpts run_opts, verify_opts;
    CLI::App* cmd_run = app.add_subcommand("run", "execute a scenario and export its data");
    add_common(cmd_run, run_opts);
    CLI::App* cmd_verify =
        app.add_subcommand("verify", "run a scenario against its closed-form oracle");
    add_common(cmd_verify, verify_opts);
    app.add_subcommand("list-scenarios", "list the built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (app.got_subcommand("list-scenarios")) {
            for (const std::string& s : tdgl::known_scenarios()) std::cout << s << '\n';
            return kExitOk;
        }
        if (app.got_subcommand(cmd_run)) {
            tdgl::ScenarioConfig cfg;
            if (int rc = load_config(run_opts, cfg); rc != kExitOk) return rc;
            tdgl::RunReport rep = tdgl::run_scenario(cfg);
            std::cout << "wrote " << rep.snapshots << " snapshot(s) to " << rep.out_dir.string()
                      << '\n';
            std::cout << rep.manifest["metrics"].dump(2) << '\n';
            return kExitOk;
        }
        if (app.got_subcommand(cmd_verify)) {
            tdgl::ScenarioConfig cfg;
            if (int rc = load_config(verify_opts, cfg); rc != kExitOk) return rc;
            tdgl::VerifyReport rep = tdgl::verify_scenario(cfg);
            for (const std::string& line : rep.lines) std::cout << line << '\n';
            std::cout << (rep.passed ? "verification passed" : "verification FAILED") << '\n';
            return rep.passed ? kExitOk : kExitVerification;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}
