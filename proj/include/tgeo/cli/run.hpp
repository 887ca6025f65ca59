#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "tgeo/cli/config.hpp"
#include "tgeo/cli/output.hpp"

namespace tgeo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

struct RunRequest {
    /// One of sigma, tube, worldline, ensemble, compare, constants.
    std::string subcommand;
    /// JSON config file; empty means defaults only.
    std::string config_path;
    /// "dotted.key=value" assignments applied in order.
    std::vector<std::string> overrides;
};

/// Loads the config, runs the subcommand and writes its outputs plus
/// manifest.json. A one-line summary goes to `out`; on failure a one-line
/// JSON error goes to `err` and nothing is written. Returns the exit code.
int run(const RunRequest& req, std::ostream& out, std::ostream& err);

/// Output directory: output.directory, else $TGEO_OUTPUT_DIR, else "tgeo_out".
std::string resolve_output_dir(const ExperimentConfig& cfg);

/// Data files and a summary for one subcommand, without touching the disk.
struct SubcommandResult {
    OutputSet files;
    nlohmann::json summary;
    std::string message;  ///< line printed on success
    std::uint64_t seed = 0;
};

SubcommandResult run_sigma(const ExperimentConfig& cfg);
SubcommandResult run_constants(const ExperimentConfig& cfg);
SubcommandResult run_tube(const ExperimentConfig& cfg);
SubcommandResult run_worldline(const ExperimentConfig& cfg);
SubcommandResult run_ensemble(const ExperimentConfig& cfg);
SubcommandResult run_compare(const ExperimentConfig& cfg);

}  // namespace tgeo::cli
