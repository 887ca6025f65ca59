#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tgeo/ensemble/compare.hpp"
#include "tgeo/geo_objects.hpp"
#include "tgeo/worldfunc.hpp"
#include "tgeo/worldline.hpp"

namespace tgeo::cli {

using nlohmann::json;

/// Version string recorded in every run manifest.
inline constexpr const char* kArtifactVersion = "1.0.0";

/// Environment variable naming the output directory when the config leaves
/// output.directory empty.
inline constexpr const char* kOutputDirEnv = "TGEO_OUTPUT_DIR";

/// The complete default configuration. Every accepted key appears here.
json default_config();

/// Merges `user` into `base`. Keys missing from `base` are rejected, and
/// each value must have the type of the value it replaces. Numbers given
/// for floating-point keys are stored as doubles.
void merge_config(json& base, const json& user, const std::string& prefix = "");

/// Applies one "dotted.key=value" override. The value is read as JSON when
/// it parses, otherwise as a string.
void apply_override(json& cfg, const std::string& assignment);

/// Defaults, then the file at `path` (skipped when empty), then overrides.
json load_config(const std::string& path, const std::vector<std::string>& overrides);

/// Keys that change where or how fast a run happens but not its results.
inline constexpr std::pair<const char*, const char*> kExecutionKeys[] = {
    {"output", "directory"}, {"worldline", "workers"}};

/// Hex SHA-256 of the canonical serialization (sorted keys, shortest
/// round-trip numbers), leaving out kExecutionKeys.
std::string config_hash(const json& cfg);

struct GeometryConfig {
    WorldKind kind = WorldKind::DistortedMinkowski;
    std::size_t dimension = 4;
    DistortionProfile profile;
    /// Unit system of `constants`: "natural" or "cgs".
    std::string units = "cgs";
    PhysicalConstants constants;

    /// Simulation world function in natural units (c = 1).
    WorldFunction world() const;
};

struct SigmaConfig {
    Point p;
    Point q;
};

struct TubeConfig {
    Point p0;
    Point p1;
    double radius_sq = 4.0;
    CrossSectionOptions options;
};

struct WorldlineConfig {
    double mu = 1.0;
    std::size_t steps = 100;
    std::size_t lines = 1000;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    WorldlineOptions options;
};

enum class Solver { Liouville, Hydro, Schrodinger };

struct EnsembleConfig {
    Solver solver = Solver::Hydro;
    bool quantum = true;
    double x_lo = -7.4;
    double x_hi = 7.4;
    std::size_t nx = 1024;
    double p_lo = -8.0;
    double p_hi = 8.0;
    std::size_t np = 512;
    /// 0 selects a step from the solver's stability bound.
    double dt = 0.0;
    double t_end = 1.0;
    std::size_t n_outputs = 4;
    HamiltonSpec hamilton;
    double b0 = 1.0;
    double x0 = 0.0;
    double sigma0 = 1.0;
    double p0 = 0.0;
    double beam_width = 0.05;
};

struct OutputConfig {
    std::string directory;
    bool csv = true;
    bool json = true;
    bool dump_lines = false;
};

struct ExperimentConfig {
    GeometryConfig geometry;
    SigmaConfig sigma;
    TubeConfig tube;
    WorldlineConfig worldline;
    EnsembleConfig ensemble;
    GaussianBenchmark compare;
    OutputConfig output;
};

/// Typed view of a merged config. Throws ValidationError on bad enums,
/// non-positive physical values or points of the wrong dimension.
ExperimentConfig parse_config(const json& cfg);

const char* to_string(Solver s) noexcept;

}  // namespace tgeo::cli
