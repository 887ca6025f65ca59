#include "tgeo/cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "tgeo/ensemble/hydro.hpp"
#include "tgeo/ensemble/liouville.hpp"
#include "tgeo/ensemble/schrodinger.hpp"
#include "tgeo/error.hpp"
#include "tgeo/sigma_ops.hpp"

namespace tgeo::cli {

namespace {

json coords_json(const Point& p) {
    json a = json::array();
    for (double c : p.coords()) a.push_back(c);
    return a;
}

// t, x, y, z with missing spatial axes written as 0.
std::array<double, 4> padded(const Point& p) {
    std::array<double, 4> c{};
    for (std::size_t i = 0; i < p.dim(); ++i) c[i] = p[i];
    return c;
}

std::string short_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5g", v);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// sigma, constants

SubcommandResult run_sigma(const ExperimentConfig& cfg) {
    const WorldFunction wf = cfg.geometry.world();
    const Point& p = cfg.sigma.p;
    const Point& q = cfg.sigma.q;
    const double s = wf(p, q);
    const double base = wf.base(p, q);
    SubcommandResult r;
    r.summary = {{"kind", to_string(wf.kind())},
                 {"dimension", wf.dim()},
                 {"p", coords_json(p)},
                 {"q", coords_json(q)},
                 {"sigma", s},
                 {"sigma_base", base},
                 {"distortion", s - base}};
    if (cfg.output.json) r.files.add("sigma.json", json_text(r.summary));
    r.message = "sigma = " + format_double(s);
    return r;
}

SubcommandResult run_constants(const ExperimentConfig& cfg) {
    const PhysicalConstants& k = cfg.geometry.constants;
    const double d = derive_distortion_scale(k);
    const bool cgs = cfg.geometry.units == "cgs";
    SubcommandResult r;
    r.summary = {{"units", cfg.geometry.units},
                 {"hbar", k.hbar},
                 {"b", k.b},
                 {"c", k.c},
                 {"d", d},
                 {"d_unit", cgs ? "cm^2" : "natural"}};
    if (cfg.output.json) r.files.add("constants.json", json_text(r.summary));
    r.message = "d = " + short_g(d) + (cgs ? " cm^2" : "");
    return r;
}

// ---------------------------------------------------------------------------
// tube

SubcommandResult run_tube(const ExperimentConfig& cfg) {
    const WorldFunction wf = cfg.geometry.world();
    const TubeConfig& tc = cfg.tube;
    const CrossSection cs = cross_section_solve(wf, tc.p0, tc.p1, tc.radius_sq, tc.options);

    CsvWriter csv({"dir_index", "branch", "t", "x", "y", "z", "residual_F2", "residual_sphere"});
    double max_f2 = 0.0, max_sphere = 0.0;
    for (const auto& s : cs.samples) {
        const auto c = padded(s.point);
        const std::int64_t ints[] = {static_cast<std::int64_t>(s.dir_index),
                                     s.branch == Parallelism::Parallel ? 1 : -1};
        const double vals[] = {c[0], c[1], c[2], c[3], s.residual_f2, s.residual_sphere};
        csv.row(ints, vals);
        max_f2 = std::max(max_f2, std::abs(s.residual_f2));
        max_sphere = std::max(max_sphere, std::abs(s.residual_sphere));
    }
    const double eps = 10.0 * tc.options.tol;
    const auto plus = distinct_points(cs.samples_plus, eps);
    const auto minus = distinct_points(cs.samples_minus, eps);

    SubcommandResult r;
    r.seed = tc.options.seed;
    r.summary = {{"kind", to_string(wf.kind())},
                 {"radius_sq", cs.radius_sq},
                 {"n_samples", cs.samples.size()},
                 {"n_plus", cs.samples_plus.size()},
                 {"n_minus", cs.samples_minus.size()},
                 {"n_plus_distinct", plus.size()},
                 {"n_minus_distinct", minus.size()},
                 {"diameter_plus", diameter(plus)},
                 {"max_residual_f2", max_f2},
                 {"max_residual_sphere", max_sphere},
                 {"f2_scale", cs.f2_scale},
                 {"failed_directions", cs.failed_directions.size()}};
    if (cfg.output.csv) r.files.add("tube.csv", csv.text());
    if (cfg.output.json) r.files.add("tube.json", json_text(r.summary));
    r.message = "tube: " + std::to_string(plus.size()) + " distinct parallel points, diameter " +
                format_double(diameter(plus));
    return r;
}

// ---------------------------------------------------------------------------
// worldline

SubcommandResult run_worldline(const ExperimentConfig& cfg) {
    const WorldFunction wf = cfg.geometry.world();
    const WorldlineConfig& wc = cfg.worldline;
    const std::vector<double> zero(wf.dim(), 0.0);
    const Point p0{std::span<const double>(zero)};
    const Point p1 = initial_link(wf, p0, wc.mu);
    const auto lines =
        generate_ensemble(wf, p0, p1, wc.lines, wc.steps, wc.seed, wc.workers, wc.options);
    const EnsembleStats st = ensemble_stats(lines);

    SubcommandResult r;
    r.seed = wc.seed;
    r.summary = {{"mean_lateral", st.mean_lateral},
                 {"cov", st.cov_lateral},
                 {"slope", st.regression_slope},
                 {"r2", st.regression_r2},
                 {"n_lines", st.n_lines},
                 {"n_steps", st.n_steps}};
    if (cfg.output.json) r.files.add("worldline_stats.json", json_text(r.summary));
    if (cfg.output.dump_lines && cfg.output.csv) {
        CsvWriter csv({"line", "step", "t", "x", "y", "z"});
        for (std::size_t l = 0; l < lines.size(); ++l) {
            for (std::size_t k = 0; k < lines[l].points.size(); ++k) {
                const auto c = padded(lines[l].points[k]);
                const std::int64_t ints[] = {static_cast<std::int64_t>(l),
                                             static_cast<std::int64_t>(k)};
                csv.row(ints, c);
            }
        }
        r.files.add("worldline_lines.csv", csv.text());
    }
    r.message = "worldline: " + std::to_string(st.n_lines) + " lines x " +
                std::to_string(st.n_steps) + " steps, slope " + format_double(st.regression_slope) +
                ", r2 " + format_double(st.regression_r2);
    return r;
}

// ---------------------------------------------------------------------------
// ensemble

namespace {

Field normal_density(const Grid1D& g, double mean, double sigma) {
    Field rho(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double z = (g.x(i) - mean) / sigma;
        rho[i] = std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
    }
    return rho;
}

std::string snapshot_name(std::size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "ensemble_%03zu.csv", k);
    return buf;
}

// Steps of equal length covering `interval` with none longer than dt_max.
std::pair<double, std::size_t> split_interval(double interval, double dt_max) {
    if (!(dt_max > 0.0)) throw NumericalError("no admissible time step");
    std::size_t n = 1;
    if (std::isfinite(dt_max)) n = static_cast<std::size_t>(std::ceil(interval / dt_max));
    n = std::max<std::size_t>(n, 1);
    return {interval / static_cast<double>(n), n};
}

struct Snapshots {
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<std::string> names;
};

void require_free(const EnsembleConfig& e, const char* solver) {
    if (e.hamilton.kind != HamiltonKind::FreeNonrel || e.hamilton.v1 != 0.0 ||
        e.hamilton.v2 != 0.0)
        throw ValidationError(std::string(solver) + " solver supports only the free nonrelativistic Hamiltonian");
}

Snapshots ensemble_schrodinger(const EnsembleConfig& e, OutputSet& files, bool csv) {
    require_free(e, "schrodinger");
    if (!e.quantum) throw ValidationError("schrodinger solver requires quantum = on");
    if (e.b0 != e.hamilton.hbar) throw ValidationError("schrodinger solver requires b0 == hbar");
    const Grid1D g = make_grid(e.x_lo, e.x_hi, e.nx, Boundary::Periodic);
    PsiField psi = gaussian_packet(g, e.x0, e.sigma0, e.p0, e.hamilton.hbar);
    const double dt_max = e.dt > 0.0 ? e.dt : 1e-3;

    Snapshots snap;
    for (std::size_t k = 0; k <= e.n_outputs; ++k) {
        if (k > 0) {
            const double interval = e.t_end / static_cast<double>(e.n_outputs);
            const auto [dt, n] = split_interval(interval, dt_max);
            psi = schrodinger_evolve(psi, e.hamilton.m, e.hamilton.hbar, dt, n);
        }
        snap.times.push_back(psi.t);
        snap.mass.push_back(integrate(g, psi.density()));
        if (csv) {
            CsvWriter w({"x", "re", "im"});
            for (std::size_t i = 0; i < g.n; ++i) {
                const auto z = psi.components[0][i];
                const double v[] = {g.x(i), z.real(), z.imag()};
                w.row(v);
            }
            snap.names.push_back(snapshot_name(k));
            files.add(snap.names.back(), w.text());
        }
    }
    return snap;
}

Snapshots ensemble_hydro(const EnsembleConfig& e, OutputSet& files, bool csv) {
    HydroState s;
    s.grid = make_grid(e.x_lo, e.x_hi, e.nx, Boundary::Open);
    s.rho = normal_density(s.grid, e.x0, e.sigma0);
    s.phi.resize(e.nx);
    for (std::size_t i = 0; i < e.nx; ++i) s.phi[i] = e.p0 * s.grid.x(i) / e.b0;
    s.b0 = e.b0;

    Snapshots snap;
    for (std::size_t k = 0; k <= e.n_outputs; ++k) {
        if (k > 0) {
            const double interval = e.t_end / static_cast<double>(e.n_outputs);
            const double dt_max =
                e.dt > 0.0 ? e.dt : 0.8 * hydro_max_dt(s, e.hamilton, e.quantum);
            const auto [dt, n] = split_interval(interval, dt_max);
            s = hydro_evolve(s, e.hamilton, e.quantum, dt, n);
        }
        snap.times.push_back(s.t);
        snap.mass.push_back(integrate(s.grid, s.rho));
        if (csv) {
            CsvWriter w({"x", "rho", "phi"});
            for (std::size_t i = 0; i < s.grid.n; ++i) {
                const double v[] = {s.grid.x(i), s.rho[i], s.phi[i]};
                w.row(v);
            }
            snap.names.push_back(snapshot_name(k));
            files.add(snap.names.back(), w.text());
        }
    }
    return snap;
}

double liouville_max_dt(const PhaseSpaceDensity& F, const HamiltonSpec& H) {
    double vx = 0.0, vp = 0.0;
    for (std::size_t j = 0; j < F.p_grid.n; ++j) vx = std::max(vx, std::abs(H.dh_dp(F.p_grid.x(j))));
    for (std::size_t i = 0; i < F.x_grid.n; ++i) vp = std::max(vp, std::abs(H.dh_dx(F.x_grid.x(i))));
    double bound = std::numeric_limits<double>::infinity();
    if (vx > 0.0) bound = std::min(bound, F.x_grid.dx / vx);
    if (vp > 0.0) bound = std::min(bound, F.p_grid.dx / vp);
    return 0.9 * bound;
}

Snapshots ensemble_liouville(const EnsembleConfig& e, OutputSet& files, bool csv) {
    if (e.quantum) throw ValidationError("liouville solver is classical; set quantum = off");
    const Grid1D xg = make_grid(e.x_lo, e.x_hi, e.nx, Boundary::Periodic);
    const Grid1D pg = make_grid(e.p_lo, e.p_hi, e.np, Boundary::Periodic);
    PhaseSpaceDensity F =
        pure_ensemble_density(xg, pg, normal_density(xg, e.x0, e.sigma0), Field(e.nx, e.p0), e.beam_width);
    const double dt_max = e.dt > 0.0 ? e.dt : 0.8 * liouville_max_dt(F, e.hamilton);

    Snapshots snap;
    for (std::size_t k = 0; k <= e.n_outputs; ++k) {
        if (k > 0) {
            const double interval = e.t_end / static_cast<double>(e.n_outputs);
            const auto [dt, n] = split_interval(interval, dt_max);
            F = liouville_evolve(F, e.hamilton, dt, n);
        }
        snap.times.push_back(F.t);
        snap.mass.push_back(F.mass());
        if (csv) {
            const Moments m = moments_from_F(F, 4.0 * e.beam_width);
            // phi from P = b0 dphi/dx by the trapezoid rule, 0 at the left edge
            CsvWriter w({"x", "rho", "phi"});
            double phi = 0.0;
            for (std::size_t i = 0; i < xg.n; ++i) {
                if (i > 0) phi += 0.5 * xg.dx * (m.P[i - 1] + m.P[i]) / e.b0;
                const double v[] = {xg.x(i), m.rho[i], phi};
                w.row(v);
            }
            snap.names.push_back(snapshot_name(k));
            files.add(snap.names.back(), w.text());
        }
    }
    return snap;
}

}  // namespace

SubcommandResult run_ensemble(const ExperimentConfig& cfg) {
    const EnsembleConfig& e = cfg.ensemble;
    SubcommandResult r;
    Snapshots snap;
    switch (e.solver) {
        case Solver::Schrodinger: snap = ensemble_schrodinger(e, r.files, cfg.output.csv); break;
        case Solver::Hydro: snap = ensemble_hydro(e, r.files, cfg.output.csv); break;
        case Solver::Liouville: snap = ensemble_liouville(e, r.files, cfg.output.csv); break;
    }
    const double drift = std::abs(snap.mass.back() - snap.mass.front()) / snap.mass.front();
    r.summary = {{"solver", to_string(e.solver)},
                 {"quantum", e.quantum},
                 {"times", snap.times},
                 {"mass", snap.mass},
                 {"mass_drift", drift},
                 {"snapshots", snap.names}};
    if (cfg.output.json) r.files.add("ensemble.json", json_text(r.summary));
    r.message = std::string("ensemble: ") + to_string(e.solver) + " to t = " +
                format_double(snap.times.back()) + ", mass drift " + short_g(drift);
    return r;
}

// ---------------------------------------------------------------------------
// compare

SubcommandResult run_compare(const ExperimentConfig& cfg) {
    const BenchmarkResult b = run_gaussian_benchmark(cfg.compare);
    SubcommandResult r;
    r.summary = {{"l1", b.l1},
                 {"l2", b.l2},
                 {"linf", b.linf},
                 {"variance_rel_err", b.variance_rel_err},
                 {"pass", b.pass}};
    if (cfg.output.json) r.files.add("compare.json", json_text(r.summary));
    r.message = r.summary.dump();
    return r;
}

// ---------------------------------------------------------------------------

std::string resolve_output_dir(const ExperimentConfig& cfg) {
    if (!cfg.output.directory.empty()) return cfg.output.directory;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return "tgeo_out";
}

namespace {

void report(std::ostream& err, const char* kind, const std::string& message, json extra = {}) {
    json line = {{"error", kind}, {"message", message}};
    if (extra.is_object()) line.update(extra);
    err << line.dump() << '\n';
}

}  // namespace

int run(const RunRequest& req, std::ostream& out, std::ostream& err) {
    const std::string started = utc_now();
    try {
        const json raw = load_config(req.config_path, req.overrides);
        const ExperimentConfig cfg = parse_config(raw);

        SubcommandResult r;
        if (req.subcommand == "sigma") {
            r = run_sigma(cfg);
        } else if (req.subcommand == "constants") {
            r = run_constants(cfg);
        } else if (req.subcommand == "tube") {
            r = run_tube(cfg);
        } else if (req.subcommand == "worldline") {
            r = run_worldline(cfg);
        } else if (req.subcommand == "ensemble") {
            r = run_ensemble(cfg);
        } else if (req.subcommand == "compare") {
            r = run_compare(cfg);
        } else {
            throw ValidationError("unknown subcommand '" + req.subcommand + "'");
        }

        const std::filesystem::path dir = resolve_output_dir(cfg);
        RunManifest m;
        m.subcommand = req.subcommand;
        m.config_hash = config_hash(raw);
        m.artifact_version = kArtifactVersion;
        m.seed = r.seed;
        m.started_utc = started;
        m.files = r.files.commit(dir);
        m.finished_utc = utc_now();
        write_atomic(dir / "manifest.json", json_text(m.to_json()));
        out << r.message << '\n';
        return kExitOk;
    } catch (const ValidationError& e) {
        report(err, "validation", e.what());
        return kExitValidation;
    } catch (const json::exception& e) {
        report(err, "validation", e.what());
        return kExitValidation;
    } catch (const WorldlineError& e) {
        report(err, "numerical", e.what(), {{"step", e.step()}});
        return kExitNumerical;
    } catch (const DomainError& e) {
        report(err, "numerical", e.what(), {{"term", e.term()}});
        return kExitNumerical;
    } catch (const NumericalError& e) {
        report(err, "numerical", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        report(err, "numerical", e.what());
        return kExitNumerical;
    }
}

}  // namespace tgeo::cli
