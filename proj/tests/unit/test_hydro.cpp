#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tgeo/ensemble/hydro.hpp"
#include "tgeo/error.hpp"

using namespace tgeo;

namespace {

constexpr double kPi = std::numbers::pi;

double normal(double x, double var) { return std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * kPi * var); }

HydroState periodic_state(std::size_t n) {
    HydroState s;
    s.grid = make_grid(0.0, 2.0 * kPi, n, Boundary::Periodic);
    s.rho.resize(n);
    s.phi.resize(n);
    return s;
}

HydroState gaussian_state(std::size_t n, double half_width = 7.4) {
    HydroState s;
    s.grid = make_grid(-half_width, half_width, n, Boundary::Open);
    s.rho.resize(n);
    s.phi.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) s.rho[i] = normal(s.grid.x(i), 1.0);
    return s;
}

}  // namespace

TEST_SUITE("hydro") {

TEST_CASE("classical flow with constant velocity translates rigidly") {
    HydroState s = periodic_state(128);
    for (std::size_t i = 0; i < s.grid.n; ++i) {
        const double x = s.grid.x(i);
        s.rho[i] = 1.0 + 0.5 * std::cos(x);
        s.phi[i] = 2.0 * x;  // P = 2, wound twice around the circle
    }
    s.xi = {Field(s.grid.n)};
    for (std::size_t i = 0; i < s.grid.n; ++i) s.xi[0][i] = std::sin(s.grid.x(i));
    HamiltonSpec H;
    const double dt = 0.5 * hydro_max_dt(s, H, false);
    const std::size_t n = static_cast<std::size_t>(1.0 / dt);
    const HydroState out = hydro_evolve(s, H, false, 1.0 / double(n), n);
    CHECK(out.t == doctest::Approx(1.0));
    for (std::size_t i = 0; i < s.grid.n; ++i) {
        const double x = s.grid.x(i);
        CHECK(std::abs(out.rho[i] - (1.0 + 0.5 * std::cos(x - 2.0))) < 1e-6);
        CHECK(std::abs(out.xi[0][i] - std::sin(x - 2.0)) < 1e-6);
    }
    const Field p = out.momentum();
    for (double v : p) CHECK(v == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("quantum gaussian spreads like the free packet") {
    HydroState s = gaussian_state(256);
    HamiltonSpec H;
    const double dt = 0.5 * hydro_max_dt(s, H, true);
    const std::size_t n = static_cast<std::size_t>(std::ceil(0.5 / dt));
    const HydroState out = hydro_evolve(s, H, true, 0.5 / double(n), n);
    // variance 1 + (t/2)^2 at t = 0.5
    for (std::size_t i = 0; i < s.grid.n; ++i)
        CHECK(std::abs(out.rho[i] - normal(s.grid.x(i), 1.0625)) < 1e-5);
}

TEST_CASE("cold matter falls into a harmonic well") {
    // the edges thin out as matter falls in; keep them above the floor
    HydroState s = gaussian_state(512, 6.0);
    HamiltonSpec H;
    H.kind = HamiltonKind::QuadraticPotential;
    H.v2 = 1.0;
    const double t = 0.5;
    // starts at rest; the speed reaches |x| sin t < 4 on the grid
    const double dt = 0.2 * s.grid.dx / 4.0;
    const std::size_t n = static_cast<std::size_t>(std::ceil(t / dt));
    const HydroState out = hydro_evolve(s, H, false, t / double(n), n);
    // x(t) = x0 cos t, so rho(x, t) = rho0(x / cos t) / cos t
    const double c = std::cos(t);
    for (std::size_t i = 0; i < s.grid.n; ++i) {
        const double x = s.grid.x(i);
        CHECK(std::abs(out.rho[i] - normal(x, c * c)) < 1e-5);
    }
}

TEST_CASE("mass is conserved on periodic grids") {
    HydroState s = periodic_state(128);
    for (std::size_t i = 0; i < s.grid.n; ++i) {
        const double x = s.grid.x(i);
        s.rho[i] = 1.0 + 0.5 * std::cos(x) + 0.2 * std::sin(3.0 * x);
        s.phi[i] = 0.3 * std::sin(x) + 0.2 * std::cos(2.0 * x);
    }
    HamiltonSpec H;
    const double m0 = integrate(s.grid, s.rho);
    const HydroState out = hydro_evolve(s, H, true, 0.5 * hydro_max_dt(s, H, true), 10000);
    CHECK(std::abs(integrate(s.grid, out.rho) - m0) / m0 < 1e-8);
}

TEST_CASE("dealiasing keeps resolved modes and the winding") {
    const Grid1D g = make_grid(0.0, 2.0 * kPi, 48, Boundary::Periodic);
    Field f(g.n), wound(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        f[i] = 0.7 + std::sin(3.0 * x) + 0.2 * std::cos(17.0 * x) + 0.1 * std::sin(20.0 * x);
        wound[i] = 3.0 * x + 0.5 * std::cos(2.0 * x) + 0.3 * std::cos(23.0 * x);
    }
    dealias(g, f);
    dealias(g, wound, 6.0 * kPi);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        // modes 17 and 20 lie above 48 / 3 and are removed
        CHECK(f[i] == doctest::Approx(0.7 + std::sin(3.0 * x)).epsilon(1e-13).scale(1.0));
        CHECK(wound[i] == doctest::Approx(3.0 * x + 0.5 * std::cos(2.0 * x)).epsilon(1e-13).scale(1.0));
    }
    const Grid1D open = make_grid(0.0, 1.0, 16, Boundary::Open);
    Field h(16, 1.0);
    CHECK_THROWS_AS(dealias(open, h), ValidationError);
}

TEST_CASE("long quantum runs stay resolved on periodic grids") {
    // without dealiasing, rounding noise in the top modes grows until the
    // velocity breaks the stability bound before t = 3.6
    HydroState s = periodic_state(128);
    for (std::size_t i = 0; i < s.grid.n; ++i) {
        const double x = s.grid.x(i);
        s.rho[i] = 1.0 + 0.3 * std::cos(x) + 0.2 * std::sin(2.0 * x);
        s.phi[i] = 0.6 * std::sin(x) + 0.2 * std::cos(3.0 * x);
    }
    HamiltonSpec H;
    const double m0 = integrate(s.grid, s.rho);
    const HydroState out = hydro_evolve(s, H, true, 0.5 * hydro_max_dt(s, H, true), 12000);
    CHECK(out.t > 3.5);
    CHECK(std::abs(integrate(s.grid, out.rho) - m0) / m0 < 1e-10);
}

TEST_CASE("quantum potential of a gaussian") {
    const HydroState s = gaussian_state(400);
    const double hbar = 0.7, m = 1.3;
    const Field u = quantum_potential(s.grid, s.rho, hbar, m);
    for (std::size_t i = 0; i < s.grid.n; ++i) {
        const double x = s.grid.x(i);
        // s = -x^2/2 + const: s''/2 + s'^2/4 = -1/2 + x^2/4
        CHECK(u[i] == doctest::Approx(-hbar * hbar / (2.0 * m) * (-0.5 + 0.25 * x * x))
                          .epsilon(1e-6)
                          .scale(1.0));
    }
}

TEST_CASE("quantum potential is the variation of the quantum energy") {
    HydroState s = periodic_state(128);
    Field eta(s.grid.n);
    for (std::size_t i = 0; i < s.grid.n; ++i) {
        const double x = s.grid.x(i);
        s.rho[i] = 1.0 + 0.5 * std::cos(x) + 0.2 * std::sin(3.0 * x);
        eta[i] = std::sin(2.0 * x) + 0.5 * std::cos(x);
    }
    const double hbar = 0.8, m = 1.1, eps = 1e-6;
    Field up = s.rho, dn = s.rho;
    for (std::size_t i = 0; i < s.grid.n; ++i) {
        up[i] += eps * eta[i];
        dn[i] -= eps * eta[i];
    }
    const double de = (quantum_energy(s.grid, up, hbar, m) - quantum_energy(s.grid, dn, hbar, m)) /
                      (2.0 * eps);
    const Field u = quantum_potential(s.grid, s.rho, hbar, m);
    Field ue(s.grid.n);
    for (std::size_t i = 0; i < s.grid.n; ++i) ue[i] = u[i] * eta[i];
    CHECK(de == doctest::Approx(integrate(s.grid, ue)).epsilon(1e-7));
}

TEST_CASE("preconditions and failures") {
    HydroState s = gaussian_state(128);
    HamiltonSpec H;
    const double dt = hydro_max_dt(s, H, true);
    CHECK(dt == doctest::Approx(0.25 * s.grid.dx * s.grid.dx));
    CHECK_THROWS_AS(hydro_evolve(s, H, true, 1.01 * dt, 1), ValidationError);
    CHECK_THROWS_AS(hydro_evolve(s, H, true, 0.0, 1), ValidationError);

    HamiltonSpec rel;
    rel.kind = HamiltonKind::FreeRel;
    CHECK_THROWS_AS(hydro_evolve(s, rel, false, dt, 1), ValidationError);

    HamiltonSpec pot;
    pot.kind = HamiltonKind::QuadraticPotential;
    pot.v2 = 1.0;
    CHECK_THROWS_AS(hydro_evolve(s, pot, true, dt, 1), ValidationError);
    CHECK(std::isinf(hydro_max_dt(s, pot, false)));  // at rest, no quantum term
    CHECK_NOTHROW(hydro_evolve(s, pot, false, dt, 1));

    HydroState empty = s;
    for (std::size_t i = 0; i < 10; ++i) empty.rho[i] = 0.0;
    CHECK_THROWS_AS(hydro_evolve(empty, H, true, dt, 1), NumericalError);

    HydroState bad = s;
    bad.phi.pop_back();
    CHECK_THROWS_AS(hydro_evolve(bad, H, true, dt, 1), ValidationError);
}

}  // TEST_SUITE
