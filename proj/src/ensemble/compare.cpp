#include "tgeo/ensemble/compare.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tgeo/ensemble/hydro.hpp"
#include "tgeo/ensemble/liouville.hpp"
#include "tgeo/ensemble/schrodinger.hpp"
#include "tgeo/error.hpp"

namespace tgeo {

std::pair<double, double> density_moments(const Grid1D& g, std::span<const double> rho) {
    check_field(g, rho, "rho");
    const double mass = integrate(g, rho);
    if (!(mass > 0.0)) throw ValidationError("density has no mass");
    Field w(g.n);
    for (std::size_t i = 0; i < g.n; ++i) w[i] = g.x(i) * rho[i];
    const double mean = integrate(g, w) / mass;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double d = g.x(i) - mean;
        w[i] = d * d * rho[i];
    }
    return {mean, integrate(g, w) / mass};
}

DensityMetrics compare_densities(const Grid1D& ga, std::span<const double> a, const Grid1D& gb,
                                 std::span<const double> b) {
    if (ga.n != gb.n || ga.dx != gb.dx || ga.x_min != gb.x_min)
        throw ValidationError("densities live on different grids");
    check_field(ga, a, "a");
    check_field(gb, b, "b");
    DensityMetrics m;
    Field d1(ga.n), d2(ga.n);
    for (std::size_t i = 0; i < ga.n; ++i) {
        const double d = std::abs(a[i] - b[i]);
        d1[i] = d;
        d2[i] = d * d;
        m.linf = std::max(m.linf, d);
    }
    m.l1 = integrate(ga, d1);
    m.l2 = std::sqrt(integrate(ga, d2));
    std::tie(m.mean_a, m.var_a) = density_moments(ga, a);
    std::tie(m.mean_b, m.var_b) = density_moments(gb, b);
    return m;
}

BenchmarkResult run_gaussian_benchmark(const GaussianBenchmark& cfg) {
    if (cfg.check_times.empty()) throw ValidationError("benchmark needs check times");
    BenchmarkResult res;
    const Grid1D periodic = make_grid(cfg.x_lo, cfg.x_hi, cfg.n, Boundary::Periodic);
    Grid1D open = periodic;
    open.boundary = Boundary::Open;
    res.grid = periodic;

    PsiField psi = gaussian_packet(periodic, 0.0, cfg.sigma0, 0.0, cfg.hbar);
    HydroState hs;
    hs.grid = open;
    hs.rho = psi.density();
    hs.phi.assign(cfg.n, 0.0);
    hs.b0 = cfg.hbar;
    const HamiltonSpec H{HamiltonKind::FreeNonrel, cfg.m, 1.0, cfg.hbar, 0.0, 0.0};

    std::vector<double> times = cfg.check_times;
    std::sort(times.begin(), times.end());
    if (times.back() < cfg.t_end) times.push_back(cfg.t_end);

    double t = 0.0;
    for (double target : times) {
        if (!(target > t)) throw ValidationError("check times must be positive and distinct");
        const double span = target - t;
        const auto n_schr = static_cast<std::size_t>(std::ceil(span / cfg.dt_schrodinger - 1e-9));
        psi = schrodinger_evolve(psi, cfg.m, cfg.hbar, span / static_cast<double>(n_schr), n_schr);
        const double dt_h = cfg.hydro_dt_fraction * hydro_max_dt(hs, H, true);
        const auto n_h = static_cast<std::size_t>(std::ceil(span / dt_h));
        hs = hydro_evolve(hs, H, true, span / static_cast<double>(n_h), n_h);
        t = target;

        BenchmarkSnapshot snap;
        snap.t = target;
        snap.rho_hydro = hs.rho;
        snap.phi_hydro = hs.phi;
        snap.rho_schrodinger = psi.density();
        snap.metrics = compare_densities(periodic, snap.rho_hydro, periodic, snap.rho_schrodinger);
        const double s0 = cfg.sigma0;
        const double tt = cfg.hbar * target / (2.0 * cfg.m * s0);
        snap.variance_exact = s0 * s0 + tt * tt;
        snap.variance_rel_err =
            std::max(std::abs(snap.metrics.var_a - snap.variance_exact),
                     std::abs(snap.metrics.var_b - snap.variance_exact)) /
            snap.variance_exact;
        res.snapshots.push_back(std::move(snap));
    }
    for (const auto& s : res.snapshots) {
        const bool checked =
            std::find(cfg.check_times.begin(), cfg.check_times.end(), s.t) != cfg.check_times.end();
        if (!checked) continue;
        res.linf = std::max(res.linf, s.metrics.linf);
        res.variance_rel_err = std::max(res.variance_rel_err, s.variance_rel_err);
    }
    res.l1 = res.snapshots.back().metrics.l1;
    res.l2 = res.snapshots.back().metrics.l2;
    res.pass = res.linf < cfg.linf_tol && res.variance_rel_err < cfg.variance_tol;
    return res;
}

ClassicalResult run_classical_benchmark(const ClassicalBenchmark& cfg) {
    if (!(cfg.beam_width > 0.0) || !(cfg.dt > 0.0) || !(cfg.t_max > 0.0))
        throw ValidationError("beam width, dt and t_max must be positive");
    if (cfg.hydro_substeps == 0 || cfg.compare_every == 0)
        throw ValidationError("step counts must be positive");
    const Grid1D xg = make_grid(cfg.x_lo, cfg.x_hi, cfg.nx, Boundary::Periodic);
    const Grid1D pg = make_grid(cfg.p_lo, cfg.p_hi, cfg.np, Boundary::Periodic);
    Field rho0(cfg.nx), p0(cfg.nx), phi0(cfg.nx);
    for (std::size_t i = 0; i < cfg.nx; ++i) {
        const double x = xg.x(i), e = std::exp(-0.5 * x * x);
        rho0[i] = e / std::sqrt(2.0 * std::numbers::pi);
        p0[i] = x - cfg.focus * x * e;
        phi0[i] = 0.5 * x * x + cfg.focus * e;  // b0 = 1
    }
    HamiltonSpec H;
    H.kind = HamiltonKind::QuadraticPotential;
    H.m = cfg.m;
    H.v2 = cfg.v2;

    PhaseSpaceDensity F = pure_ensemble_density(xg, pg, rho0, p0, cfg.beam_width);
    HydroState hs;
    hs.grid = xg;
    hs.grid.boundary = Boundary::Open;
    hs.rho = rho0;
    hs.phi = phi0;
    const double dt_h = cfg.dt / static_cast<double>(cfg.hydro_substeps);

    ClassicalResult res;
    const auto n_total = static_cast<std::size_t>(std::floor(cfg.t_max / cfg.dt + 1e-9));
    for (std::size_t done = 0; done + cfg.compare_every <= n_total; done += cfg.compare_every) {
        F = liouville_evolve(F, H, cfg.dt, cfg.compare_every);
        hs = hydro_evolve(hs, H, false, dt_h, cfg.compare_every * cfg.hydro_substeps);
        const Moments mom = moments_from_F(F, cfg.caustic_factor * cfg.beam_width,
                                           cfg.diagnostic_floor);
        Field diff(cfg.nx);
        for (std::size_t i = 0; i < cfg.nx; ++i) diff[i] = std::abs(mom.rho[i] - hs.rho[i]);
        ClassicalSnapshot snap;
        snap.t = F.t;
        snap.l1_rel = integrate(xg, diff) / integrate(xg, mom.rho);
        snap.max_std_p = mom.max_std_p;
        snap.caustic = std::any_of(mom.multi_valued.begin(), mom.multi_valued.end(),
                                   [](char c) { return c != 0; });
        if (snap.caustic && res.caustic_time < 0.0) res.caustic_time = snap.t;
        if (res.caustic_time < 0.0) {
            res.max_l1_before = std::max(res.max_l1_before, snap.l1_rel);
            ++res.n_compared;
        }
        res.snapshots.push_back(snap);
        if (res.caustic_time >= 0.0) break;
    }
    res.pass = res.n_compared > 0 && res.max_l1_before < cfg.l1_tol;
    return res;
}

}  // namespace tgeo
