#pragma once

#include <vector>

#include "tgeo/ensemble/types.hpp"

namespace tgeo {

struct DensityMetrics {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    double mean_a = 0.0;
    double mean_b = 0.0;
    double var_a = 0.0;
    double var_b = 0.0;
};

/// Discrepancies between two densities on the same grid.
DensityMetrics compare_densities(const Grid1D& ga, std::span<const double> a, const Grid1D& gb,
                                 std::span<const double> b);

/// Mean and variance of x under rho.
std::pair<double, double> density_moments(const Grid1D& g, std::span<const double> rho);

/// Free Gaussian packet evolved by the quantum hydro solver and by the
/// Schrodinger solver on the same cells. The hydro run uses open boundaries,
/// the Schrodinger run periodic ones.
struct GaussianBenchmark {
    double hbar = 1.0;
    double m = 1.0;
    double sigma0 = 1.0;
    std::size_t n = 1024;
    double x_lo = -7.4;
    double x_hi = 7.4;
    double t_end = 2.0;
    std::vector<double> check_times{0.5, 1.0, 2.0};
    double dt_schrodinger = 1e-3;
    /// Hydro step as a fraction of the stability bound.
    double hydro_dt_fraction = 0.8;
    double linf_tol = 1e-3;
    double variance_tol = 5e-3;
};

struct BenchmarkSnapshot {
    double t = 0.0;
    Field rho_hydro;
    Field phi_hydro;
    Field rho_schrodinger;
    DensityMetrics metrics;
    double variance_exact = 0.0;
    double variance_rel_err = 0.0;  ///< max over both solvers
};

struct BenchmarkResult {
    Grid1D grid;
    std::vector<BenchmarkSnapshot> snapshots;
    double l1 = 0.0;                ///< at t_end
    double l2 = 0.0;                ///< at t_end
    double linf = 0.0;              ///< max over check times
    double variance_rel_err = 0.0;  ///< max over check times and solvers
    bool pass = false;
};

BenchmarkResult run_gaussian_benchmark(const GaussianBenchmark& cfg);

/// Cold pure ensemble in the harmonic well V = v2 x^2/2 evolved by the
/// Liouville solver and by classical hydro from matched data:
/// rho0 = N(0, 1), P0(x) = x - focus x exp(-x^2/2), beam width in p.
/// With focus > 1 the characteristics near x = 0 converge; the Liouville
/// variance diagnostic flags the approach of the caustic.
struct ClassicalBenchmark {
    double m = 1.0;
    double v2 = 1.0;
    double focus = 4.0;
    double beam_width = 0.05;
    std::size_t nx = 1024;
    double x_lo = -7.4;
    double x_hi = 7.4;
    std::size_t np = 768;
    double p_lo = -8.0;
    double p_hi = 8.0;
    double dt = 0.0016;
    /// Hydro steps per Liouville step.
    std::size_t hydro_substeps = 4;
    /// Liouville steps between comparisons.
    std::size_t compare_every = 20;
    double t_max = 0.32;
    /// Cells count for the diagnostic when rho > floor * max rho.
    double diagnostic_floor = 1e-4;
    /// Multi-valued when the conditional std of p exceeds this times beam_width.
    double caustic_factor = 4.0;
    double l1_tol = 0.02;
};

struct ClassicalSnapshot {
    double t = 0.0;
    double l1_rel = 0.0;     ///< integral |rho_L - rho_H| / integral rho_L
    double max_std_p = 0.0;  ///< Liouville conditional std of p
    bool caustic = false;
};

struct ClassicalResult {
    std::vector<ClassicalSnapshot> snapshots;
    double caustic_time = -1.0;  ///< first flagged time, -1 if none
    double max_l1_before = 0.0;  ///< over snapshots before the flagged time
    std::size_t n_compared = 0;
    bool pass = false;
};

ClassicalResult run_classical_benchmark(const ClassicalBenchmark& cfg);

}  // namespace tgeo
