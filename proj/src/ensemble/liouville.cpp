#include "tgeo/ensemble/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tgeo/error.hpp"

namespace tgeo {

namespace {

// Advects a periodic sequence by a constant displacement in place with a
// conservative flux-limited upwind step (van Leer limiter). Needs
// |shift| <= dx; keeps the sum to rounding and never creates negative values.
class Shifter {
public:
    Shifter(std::size_t n, double dx) : n_(n), dx_(dx), u_(n), flux_(n) {}

    template <class Get, class Set>
    void shift(double s, Get get, Set set) {
        for (std::size_t i = 0; i < n_; ++i) u_[i] = get(i);
        const double nu = s / dx_;
        const double a = std::abs(nu);
        // flux_[i] is the amount crossing the face between cells i and i+1
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t ip = (i + 1) % n_;
            const std::size_t up = nu > 0.0 ? i : ip;              // upwind cell
            const std::size_t down = nu > 0.0 ? ip : i;            // downwind cell
            const std::size_t far = nu > 0.0 ? (i + n_ - 1) % n_   // cell behind upwind
                                             : (ip + 1) % n_;
            const double d_down = u_[down] - u_[up];
            const double d_up = u_[up] - u_[far];
            double lim = 0.0;
            if (d_down * d_up > 0.0) lim = 2.0 * d_down * d_up / (d_down + d_up);
            const double face = u_[up] + 0.5 * (1.0 - a) * lim;
            flux_[i] = nu * face;
        }
        for (std::size_t i = 0; i < n_; ++i) set(i, u_[i] - (flux_[i] - flux_[(i + n_ - 1) % n_]));
    }

private:
    std::size_t n_;
    double dx_;
    std::vector<double> u_;
    std::vector<double> flux_;
};

}  // namespace

PhaseSpaceDensity liouville_evolve(const PhaseSpaceDensity& F, const HamiltonSpec& H, double dt,
                                   std::size_t n_steps) {
    F.validate();
    H.validate();
    if (F.x_grid.boundary != Boundary::Periodic || F.p_grid.boundary != Boundary::Periodic)
        throw ValidationError("liouville_evolve needs periodic x and p grids");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
    const std::size_t nx = F.x_grid.n, np = F.p_grid.n;

    std::vector<double> vx(np), fx(nx);
    double max_vx = 0.0, max_fx = 0.0;
    for (std::size_t j = 0; j < np; ++j) {
        vx[j] = H.dh_dp(F.p_grid.x(j));
        max_vx = std::max(max_vx, std::abs(vx[j]));
    }
    for (std::size_t i = 0; i < nx; ++i) {
        fx[i] = H.dh_dx(F.x_grid.x(i));
        max_fx = std::max(max_fx, std::abs(fx[i]));
    }
    if (dt * max_vx / F.x_grid.dx > 0.9 || dt * max_fx / F.p_grid.dx > 0.9)
        throw ValidationError("Liouville step violates the CFL bound");

    PhaseSpaceDensity out = F;
    Shifter sx(nx, F.x_grid.dx);
    Shifter sp(np, F.p_grid.dx);
    auto x_half_step = [&] {
        for (std::size_t j = 0; j < np; ++j) {
            if (vx[j] == 0.0) continue;
            double* row = out.f.data() + j * nx;
            sx.shift(
                0.5 * dt * vx[j], [&](std::size_t i) { return row[i]; },
                [&](std::size_t i, double v) { row[i] = v; });
        }
    };
    auto p_step = [&] {
        for (std::size_t i = 0; i < nx; ++i) {
            if (fx[i] == 0.0) continue;
            // dp/dt = -dH/dx
            sp.shift(
                -dt * fx[i], [&](std::size_t j) { return out.f[j * nx + i]; },
                [&](std::size_t j, double v) { out.f[j * nx + i] = v; });
        }
    };

    const bool has_force = H.has_potential();
    for (std::size_t s = 0; s < n_steps; ++s) {
        x_half_step();
        if (has_force) p_step();
        x_half_step();
        const auto [mn, mx] = std::minmax_element(out.f.begin(), out.f.end());
        if (*mn < -1e-12 * std::max(*mx, 0.0))
            throw NumericalError("phase-space density went negative (scheme failure)");
    }
    out.t = F.t + static_cast<double>(n_steps) * dt;
    return out;
}

Moments moments_from_F(const PhaseSpaceDensity& F, double beam_width_tol, double floor_rel) {
    F.validate();
    const std::size_t nx = F.x_grid.n, np = F.p_grid.n;
    const double dp = F.p_grid.dx;
    Moments m;
    m.rho.assign(nx, 0.0);
    m.P.assign(nx, 0.0);
    m.var_p.assign(nx, 0.0);
    m.mask.assign(nx, 0);
    m.multi_valued.assign(nx, 0);
    std::vector<double> col(np), wp(np);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < np; ++j) col[j] = F.at(i, j);
        m.rho[i] = dp * pairwise_sum(col);
    }
    const double floor = floor_rel * *std::max_element(m.rho.begin(), m.rho.end());
    for (std::size_t i = 0; i < nx; ++i) {
        if (!(m.rho[i] > floor) || !(m.rho[i] > 0.0)) continue;
        m.mask[i] = 1;
        for (std::size_t j = 0; j < np; ++j) wp[j] = F.p_grid.x(j) * F.at(i, j);
        m.P[i] = dp * pairwise_sum(wp) / m.rho[i];
        for (std::size_t j = 0; j < np; ++j) {
            const double d = F.p_grid.x(j) - m.P[i];
            wp[j] = d * d * F.at(i, j);
        }
        m.var_p[i] = std::max(0.0, dp * pairwise_sum(wp) / m.rho[i]);
        const double sd = std::sqrt(m.var_p[i]);
        m.max_std_p = std::max(m.max_std_p, sd);
        if (sd > beam_width_tol) m.multi_valued[i] = 1;
    }
    return m;
}

PhaseSpaceDensity pure_ensemble_density(const Grid1D& xg, const Grid1D& pg, const Field& rho0,
                                        const Field& p0, double h) {
    xg.validate();
    pg.validate();
    check_field(xg, rho0, "rho0");
    check_field(xg, p0, "P0");
    if (!(h > 0.0)) throw ValidationError("beam width must be positive");
    PhaseSpaceDensity F;
    F.x_grid = xg;
    F.p_grid = pg;
    F.f.assign(xg.n * pg.n, 0.0);
    const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * h);
    for (std::size_t j = 0; j < pg.n; ++j)
        for (std::size_t i = 0; i < xg.n; ++i) {
            const double d = (pg.x(j) - p0[i]) / h;
            F.at(i, j) = rho0[i] * norm * std::exp(-0.5 * d * d);
        }
    return F;
}

}  // namespace tgeo
