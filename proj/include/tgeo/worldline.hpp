#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tgeo/error.hpp"
#include "tgeo/geo_objects.hpp"

namespace tgeo {

/// Broken world line with links of fixed length mu.
struct WorldLine {
    std::vector<Point> points;
    double mu = 0.0;
    std::uint64_t seed = 0;
};

struct EnsembleStats {
    std::size_t n_lines = 0;
    std::size_t n_steps = 0;
    std::vector<double> mean_lateral;              ///< at the final point
    std::vector<std::vector<double>> cov_lateral;  ///< at the final point
    std::vector<double> msd_per_step;              ///< k = 0 .. n_steps
    double regression_slope = 0.0;
    double regression_r2 = 0.0;
};

/// Measure used to pick one point of the parallel set per step.
enum class SamplingMeasure { IsotropicRestFrame };

struct WorldlineOptions {
    CrossSectionOptions cross_section{.n_directions = 64,
                                      .tol = kDefaultTol,
                                      .sampling = DirectionSampling::Lattice,
                                      .seed = 0,
                                      .scan_samples = 256,
                                      .r_max_factor = 4.0,
                                      .bisection_iterations = 80};
    SamplingMeasure measure = SamplingMeasure::IsotropicRestFrame;
    /// Fresh directions drawn before a step is declared failed.
    std::size_t max_attempts = 16;
};

/// Thrown when no forward parallel continuation is found.
class WorldlineError : public NumericalError {
public:
    WorldlineError(const std::string& what, WorldLine partial, std::size_t step)
        : NumericalError(what), partial_(std::move(partial)), step_(step) {}
    const WorldLine& partial() const noexcept { return partial_; }
    std::size_t step() const noexcept { return step_; }

private:
    WorldLine partial_;
    std::size_t step_;
};

/// Forward points R with P_cur->R parallel to P_prev->P_cur and
/// |P_cur R| = |P_prev P_cur|, sampled over n_candidates directions.
std::vector<Point> next_point_set(const WorldFunction& wf, const Point& p_prev,
                                  const Point& p_cur, std::size_t n_candidates,
                                  double tol = kDefaultTol);

/// P0 + (t, 0, ...) with 2 sigma(P0, P1) = mu^2.
Point initial_link(const WorldFunction& wf, const Point& p0, double mu);

/// One line of n_steps new points after P0, P1. The random stream is
/// determined by (seed, stream).
WorldLine generate_worldline(const WorldFunction& wf, const Point& p0, const Point& p1,
                             std::size_t n_steps, std::uint64_t seed,
                             const WorldlineOptions& opt = {}, std::uint64_t stream = 0);

/// n_lines lines, line i using stream i. Independent of the worker count.
std::vector<WorldLine> generate_ensemble(const WorldFunction& wf, const Point& p0,
                                         const Point& p1, std::size_t n_lines,
                                         std::size_t n_steps, std::uint64_t seed,
                                         std::size_t workers = 1,
                                         const WorldlineOptions& opt = {});

struct ChainCheck {
    bool ok = true;
    double max_length_residual = 0.0;  ///< max |2 sigma - mu^2| / mu^2
    std::size_t first_bad_link = 0;
    std::string reason;
};

/// Re-verifies link lengths, parallelism of adjacent links and time order.
ChainCheck verify_worldline(const WorldFunction& wf, const WorldLine& line,
                            double tol = kDefaultTol);

EnsembleStats ensemble_stats(const std::vector<WorldLine>& lines);

const char* to_string(SamplingMeasure m) noexcept;

}  // namespace tgeo
