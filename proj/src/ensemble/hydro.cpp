#include "tgeo/ensemble/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tgeo/ensemble/evaluators.hpp"
#include "tgeo/error.hpp"

namespace tgeo {

namespace {

struct Vars {
    Field s;
    Field phi;
    std::vector<Field> xi;
};

void axpy(Vars& out, const Vars& a, double h, const Vars& k) {
    for (std::size_t i = 0; i < a.s.size(); ++i) {
        out.s[i] = a.s[i] + h * k.s[i];
        out.phi[i] = a.phi[i] + h * k.phi[i];
    }
    for (std::size_t l = 0; l < a.xi.size(); ++l)
        for (std::size_t i = 0; i < a.s.size(); ++i) out.xi[l][i] = a.xi[l][i] + h * k.xi[l][i];
}

class Rhs {
public:
    Rhs(const Grid1D& g, const HamiltonSpec& H, bool quantum, double b0)
        : g_(g), H_(H), quantum_(quantum), b0_(b0), pot_(g.n, 0.0) {
        for (std::size_t i = 0; i < g.n; ++i) {
            const double x = g.x(i);
            pot_[i] = H.v1 * x + 0.5 * H.v2 * x * x;
        }
    }

    Field velocity(const Field& phi) const {
        Field v = phase_gradient(g_, phi);
        for (double& x : v) x *= b0_ / H_.m;
        return v;
    }

    void operator()(const Vars& y, Vars& dy) const {
        const std::size_t n = g_.n;
        const Field v = velocity(y.phi);
        const Field vx = derivative(g_, v, 1);
        const Field sx = derivative(g_, y.s, 1);
        Field sxx;
        if (quantum_) sxx = derivative(g_, y.s, 2);
        const double cq = -H_.hbar * H_.hbar / (2.0 * H_.m);
        for (std::size_t i = 0; i < n; ++i) {
            dy.s[i] = -v[i] * sx[i] - vx[i];
            const double p = H_.m * v[i];
            const double uq = quantum_ ? cq * (0.5 * sxx[i] + 0.25 * sx[i] * sx[i]) : 0.0;
            dy.phi[i] = -(p * p / (2.0 * H_.m) + uq + pot_[i]) / b0_;
        }
        for (std::size_t l = 0; l < y.xi.size(); ++l) {
            const Field d = derivative(g_, y.xi[l], 1);
            for (std::size_t i = 0; i < n; ++i) dy.xi[l][i] = -v[i] * d[i];
        }
    }

private:
    const Grid1D& g_;
    const HamiltonSpec& H_;
    bool quantum_;
    double b0_;
    Field pot_;
};

double stable_dt(const Grid1D& g, const Field& v, const HamiltonSpec& H, bool quantum) {
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    double bound = vmax > 0.0 ? g.dx / vmax : INFINITY;
    if (quantum) bound = std::min(bound, g.dx * g.dx * H.m / H.hbar);
    return 0.25 * bound;
}

double kFilterStrength = 0.5;

// Growth of phi over one period, a multiple of 2 pi.
double winding(const Grid1D& g, const Field& phi) {
    const double turns = integrate(g, phase_gradient(g, phi)) / (2.0 * std::numbers::pi);
    return 2.0 * std::numbers::pi * std::round(turns);
}

// Clamps s at the floor and returns the number of floored cells.
std::size_t apply_floor(Field& s) {
    const double top = *std::max_element(s.begin(), s.end());
    const double floor = top + std::log(kRhoFloorRel);
    std::size_t count = 0;
    for (double& x : s)
        if (x < floor) {
            x = floor;
            ++count;
        }
    return count;
}

void check_hamiltonian(const HamiltonSpec& H, bool quantum) {
    H.validate();
    if (H.kind == HamiltonKind::FreeRel)
        throw ValidationError("hydro_evolve supports nonrelativistic Hamiltonians only");
    if (quantum && H.has_potential())
        throw ValidationError("external potentials are limited to classical hydro runs");
}

}  // namespace

double hydro_max_dt(const HydroState& state, const HamiltonSpec& H, bool quantum) {
    state.validate();
    check_hamiltonian(H, quantum);
    Field v = phase_gradient(state.grid, state.phi);
    for (double& x : v) x *= state.b0 / H.m;
    return stable_dt(state.grid, v, H, quantum);
}

HydroState hydro_evolve(const HydroState& state, const HamiltonSpec& H, bool quantum, double dt,
                        std::size_t n_steps) {
    state.validate();
    check_hamiltonian(H, quantum);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
    const Grid1D& g = state.grid;
    const std::size_t n = g.n;
    const std::size_t max_floored = n / 100;

    const double rmax = *std::max_element(state.rho.begin(), state.rho.end());
    if (!(rmax > 0.0)) throw ValidationError("rho has no positive values");
    Vars y{Field(n), state.phi, state.xi};
    for (std::size_t i = 0; i < n; ++i) y.s[i] = std::log(std::max(state.rho[i], kRhoFloorRel * rmax));
    if (apply_floor(y.s) > max_floored)
        throw NumericalError("vacuum breakdown: rho below the floor in more than 1% of cells");

    const Rhs rhs(g, H, quantum, state.b0);
    if (dt > stable_dt(g, rhs.velocity(y.phi), H, quantum))
        throw ValidationError("hydro time step exceeds the stability bound");

    Vars k1 = y, k2 = y, k3 = y, k4 = y, tmp = y;
    for (std::size_t step = 0; step < n_steps; ++step) {
        rhs(y, k1);
        axpy(tmp, y, 0.5 * dt, k1);
        rhs(tmp, k2);
        axpy(tmp, y, 0.5 * dt, k2);
        rhs(tmp, k3);
        axpy(tmp, y, dt, k3);
        rhs(tmp, k4);
        for (std::size_t i = 0; i < n; ++i) {
            y.s[i] += dt / 6.0 * (k1.s[i] + 2.0 * k2.s[i] + 2.0 * k3.s[i] + k4.s[i]);
            y.phi[i] += dt / 6.0 * (k1.phi[i] + 2.0 * k2.phi[i] + 2.0 * k3.phi[i] + k4.phi[i]);
        }
        for (std::size_t l = 0; l < y.xi.size(); ++l)
            for (std::size_t i = 0; i < n; ++i)
                y.xi[l][i] += dt / 6.0 *
                              (k1.xi[l][i] + 2.0 * k2.xi[l][i] + 2.0 * k3.xi[l][i] + k4.xi[l][i]);
        if (g.boundary == Boundary::Open) {
            fourth_difference_filter(g, y.s, kFilterStrength);
            fourth_difference_filter(g, y.phi, kFilterStrength);
        } else {
            dealias(g, y.s);
            dealias(g, y.phi, winding(g, y.phi));
        }
        for (double x : y.s)
            if (!std::isfinite(x)) throw NumericalError("hydro state is no longer finite");
        if (apply_floor(y.s) > max_floored)
            throw NumericalError("vacuum breakdown: rho below the floor in more than 1% of cells");
        if (dt > stable_dt(g, rhs.velocity(y.phi), H, quantum))
            throw NumericalError("hydro time step exceeds the stability bound during the run");
    }

    HydroState out = state;
    out.phi = y.phi;
    out.xi = y.xi;
    for (std::size_t i = 0; i < n; ++i) out.rho[i] = std::exp(y.s[i]);
    out.t = state.t + static_cast<double>(n_steps) * dt;
    return out;
}

Field quantum_potential(const Grid1D& g, std::span<const double> rho, double hbar, double m) {
    check_rho_floor(g, rho, kRhoFloorRel);
    Field s(g.n);
    for (std::size_t i = 0; i < g.n; ++i) s[i] = std::log(rho[i]);
    const Field sx = derivative(g, s, 1), sxx = derivative(g, s, 2);
    Field u(g.n);
    const double c = -hbar * hbar / (2.0 * m);
    for (std::size_t i = 0; i < g.n; ++i) u[i] = c * (0.5 * sxx[i] + 0.25 * sx[i] * sx[i]);
    return u;
}

double quantum_energy(const Grid1D& g, std::span<const double> rho, double hbar, double m) {
    check_rho_floor(g, rho, kRhoFloorRel);
    const Field d = derivative(g, rho, 1);
    Field e(g.n);
    for (std::size_t i = 0; i < g.n; ++i) e[i] = d[i] * d[i] / rho[i];
    return hbar * hbar / (8.0 * m) * integrate(g, e);
}

}  // namespace tgeo
