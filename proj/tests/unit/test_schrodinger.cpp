#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "tgeo/ensemble/schrodinger.hpp"
#include "tgeo/error.hpp"

using namespace tgeo;

namespace {

constexpr double kPi = std::numbers::pi;

// Free Gaussian: width^2 = s0^2 (1 + (hbar t / (2 m s0^2))^2), center x0 + p0 t / m.
double gaussian_density(double x, double t, double x0, double s0, double p0, double m,
                        double hbar) {
    const double tau = hbar * t / (2.0 * m * s0 * s0);
    const double s2 = s0 * s0 * (1.0 + tau * tau);
    const double xc = x0 + p0 * t / m;
    return std::exp(-(x - xc) * (x - xc) / (2.0 * s2)) / std::sqrt(2.0 * kPi * s2);
}

}  // namespace

TEST_SUITE("schrodinger") {

TEST_CASE("gaussian packet is normalized and has the requested shape") {
    const auto g = make_grid(-20.0, 20.0, 512, Boundary::Periodic);
    const PsiField psi = gaussian_packet(g, 1.5, 0.8, 2.0, 0.5);
    CHECK(psi.b0 == 0.5);
    const Field rho = psi.density();
    CHECK(integrate(g, rho) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < g.n; ++i)
        CHECK(rho[i] == doctest::Approx(gaussian_density(g.x(i), 0, 1.5, 0.8, 2.0, 1, 0.5))
                            .epsilon(1e-12)
                            .scale(1.0));
}

TEST_CASE("free gaussian spreads as the analytic solution") {
    const auto g = make_grid(-30.0, 30.0, 1024, Boundary::Periodic);
    const double m = 1.7, hbar = 0.9;
    const PsiField psi = gaussian_packet(g, -2.0, 1.0, 1.2, hbar);
    const PsiField out = schrodinger_evolve(psi, m, hbar, 1e-2, 300);
    CHECK(out.t == doctest::Approx(3.0).epsilon(1e-12));
    const Field rho = out.density();
    double err = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        err = std::max(err, std::abs(rho[i] - gaussian_density(g.x(i), 3.0, -2.0, 1.0, 1.2, m,
                                                               hbar)));
    CHECK(err < 1e-10);
}

TEST_CASE("plane wave only picks up a phase") {
    const auto g = make_grid(0.0, 2.0 * kPi, 64, Boundary::Periodic);
    PsiField psi;
    psi.grid = g;
    CField c(g.n);
    for (std::size_t i = 0; i < g.n; ++i) c[i] = std::polar(1.0, 3.0 * g.x(i));
    psi.components = {c};
    const PsiField out = schrodinger_evolve(psi, 1.0, 1.0, 0.1, 7);
    const std::complex<double> phase = std::polar(1.0, -0.5 * 9.0 * 0.7);
    for (std::size_t i = 0; i < g.n; ++i) CHECK(std::abs(out.components[0][i] - c[i] * phase) < 1e-12);
}

TEST_CASE("norm is conserved over many steps") {
    const auto g = make_grid(-20.0, 20.0, 512, Boundary::Periodic);
    const PsiField psi = gaussian_packet(g, 0.0, 1.0, 1.0, 1.0);
    const double n0 = integrate(g, psi.density());
    const PsiField out = schrodinger_evolve(psi, 1.0, 1.0, 1e-3, 10000);
    CHECK(std::abs(integrate(g, out.density()) - n0) / n0 < 1e-8);
}

TEST_CASE("preconditions") {
    const auto g = make_grid(-5.0, 5.0, 64, Boundary::Periodic);
    const PsiField psi = gaussian_packet(g, 0.0, 1.0, 0.0, 1.0);
    CHECK_THROWS_AS(schrodinger_evolve(psi, 1.0, 2.0, 0.1, 1), ValidationError);
    CHECK_THROWS_AS(schrodinger_evolve(psi, 0.0, 1.0, 0.1, 1), ValidationError);
    CHECK_THROWS_AS(schrodinger_evolve(psi, 1.0, 1.0, -0.1, 1), ValidationError);
    PsiField two = psi;
    two.components.push_back(psi.components[0]);
    CHECK_THROWS_AS(schrodinger_evolve(two, 1.0, 1.0, 0.1, 1), ValidationError);
    const PsiField open = gaussian_packet(make_grid(-5.0, 5.0, 64, Boundary::Open), 0, 1, 0, 1);
    CHECK_THROWS_AS(schrodinger_evolve(open, 1.0, 1.0, 0.1, 1), ValidationError);
    CHECK_THROWS_AS(gaussian_packet(g, 0.0, 0.0, 0.0, 1.0), ValidationError);
}

}  // TEST_SUITE
