// tgeo: command-line runner for the geometry, world-line and ensemble modules.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "tgeo/cli/run.hpp"

namespace {

// Flags that stand for a config key. Values are kept as text and parsed
// like --set values.
struct KeyFlag {
    const char* flag;
    const char* key;
    const char* help;
};

void add_key_flags(CLI::App* sub, const std::vector<KeyFlag>& flags,
                   std::map<std::string, std::string>& values) {
    for (const auto& f : flags) sub->add_option(f.flag, values[f.key], f.help);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tgeo: T-geometry, stochastic world lines and ensemble dynamics"};
    app.require_subcommand(1);
    app.fallthrough();

    tgeo::cli::RunRequest req;
    std::string output_dir;
    app.add_option("--config", req.config_path, "JSON experiment config");
    app.add_option("--set", req.overrides, "Override a config key: dotted.key=value")
        ->take_all()
        ->allow_extra_args(false);
    app.add_option("--output-dir", output_dir,
                   std::string("Output directory (default: output.directory, then $") +
                       tgeo::cli::kOutputDirEnv + ", then tgeo_out)");

    std::map<std::string, std::string> values;
    bool dump_lines = false;
    std::string quantum;

    app.add_subcommand("sigma", "Evaluate the world function at sigma.p, sigma.q");
    app.add_subcommand("constants", "Print the distortion constant d = hbar / (2 b c)");

    auto* tube = app.add_subcommand("tube", "Solve the tube cross-section through tube.p0, tube.p1");
    add_key_flags(tube,
                  {{"--d", "geometry.d", "Distortion strength"},
                   {"--sigma0", "geometry.sigma0", "Distortion scale"},
                   {"--radius-sq", "tube.radius_sq", "Squared sphere radius"},
                   {"--directions", "tube.n_directions", "Number of sampled directions"}},
                  values);

    auto* worldline = app.add_subcommand("worldline", "Sample an ensemble of stochastic world lines");
    add_key_flags(worldline,
                  {{"--d", "geometry.d", "Distortion strength"},
                   {"--sigma0", "geometry.sigma0", "Distortion scale"},
                   {"--mu", "worldline.mu", "Link length"},
                   {"--steps", "worldline.steps", "Steps per line"},
                   {"--lines", "worldline.lines", "Number of lines"},
                   {"--seed", "worldline.seed", "Random seed"},
                   {"--workers", "worldline.workers", "Worker threads"}},
                  values);
    worldline->add_flag("--dump-lines", dump_lines, "Write every line to worldline_lines.csv");

    auto* ensemble = app.add_subcommand("ensemble", "Evolve a Gaussian ensemble with one solver");
    add_key_flags(ensemble,
                  {{"--solver", "ensemble.solver", "liouville, hydro or schrodinger"},
                   {"--nx", "ensemble.nx", "Cells in x"},
                   {"--x-lo", "ensemble.x_lo", "Left edge of the x grid"},
                   {"--x-hi", "ensemble.x_hi", "Right edge of the x grid"},
                   {"--np", "ensemble.np", "Cells in p (liouville)"},
                   {"--p-lo", "ensemble.p_lo", "Lower edge of the p grid"},
                   {"--p-hi", "ensemble.p_hi", "Upper edge of the p grid"},
                   {"--dt", "ensemble.dt", "Time step, 0 for automatic"},
                   {"--t-end", "ensemble.t_end", "Final time"},
                   {"--outputs", "ensemble.n_outputs", "Snapshots after the initial one"}},
                  values);
    ensemble->add_option("--quantum", quantum, "Quantum potential on or off")
        ->check(CLI::IsMember({"on", "off"}));

    app.add_subcommand("compare", "Run the hydro versus Schrodinger Gaussian benchmark");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        nlohmann::json line = {{"error", "validation"}, {"message", e.what()}};
        std::cerr << line.dump() << '\n';
        return tgeo::cli::kExitValidation;
    }

    req.subcommand = app.get_subcommands().front()->get_name();
    for (const auto& [key, value] : values)
        if (!value.empty()) req.overrides.push_back(key + "=" + value);
    if (!quantum.empty()) req.overrides.push_back("ensemble.quantum=" + std::string(quantum == "on" ? "true" : "false"));
    if (dump_lines) req.overrides.push_back("output.dump_lines=true");
    if (!output_dir.empty()) req.overrides.push_back("output.directory=\"" + output_dir + "\"");

    return tgeo::cli::run(req, std::cout, std::cerr);
}
