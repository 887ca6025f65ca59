#include "tgeo/ensemble/evaluators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tgeo/ensemble/types.hpp"
#include "tgeo/error.hpp"

namespace tgeo {

namespace {

void validate_constants(const PhysicalConstants& k) {
    if (!(k.m > 0.0) || !(k.hbar > 0.0) || !(k.c > 0.0) || !std::isfinite(k.m) ||
        !std::isfinite(k.hbar) || !std::isfinite(k.c))
        throw ValidationError("m, hbar and c must be positive");
}

// Difference quotient of f on the grid, same stencil as log_gradient.
Field difference(const Grid1D& g, std::span<const double> f) {
    const std::size_t n = g.n;
    Field out(n);
    const double h2 = 2.0 * g.dx;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) / h2;
    if (g.boundary == Boundary::Periodic) {
        out[0] = (f[1] - f[n - 1]) / h2;
        out[n - 1] = (f[0] - f[n - 2]) / h2;
    } else {
        out[0] = (f[1] - f[0]) / g.dx;
        out[n - 1] = (f[n - 1] - f[n - 2]) / g.dx;
    }
    return out;
}

}  // namespace

void check_rho_floor(const Grid1D& g, std::span<const double> rho, double floor_rel) {
    check_field(g, rho, "rho");
    const double mx = *std::max_element(rho.begin(), rho.end());
    if (!(mx > 0.0)) throw ValidationError("rho has no positive values");
    const double floor = floor_rel * mx;
    for (std::size_t i = 0; i < rho.size(); ++i)
        if (!(rho[i] > floor))
            throw ValidationError("rho at or below the floor at x = " + std::to_string(g.x(i)));
}

Field log_gradient(const Grid1D& g, std::span<const double> rho) {
    g.validate();
    check_rho_floor(g, rho, kRhoFloorRel);
    const std::size_t n = g.n;
    Field out(n);
    const double h2 = 2.0 * g.dx;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (rho[i + 1] - rho[i - 1]) / (h2 * rho[i]);
    if (g.boundary == Boundary::Periodic) {
        out[0] = (rho[1] - rho[n - 1]) / (h2 * rho[0]);
        out[n - 1] = (rho[0] - rho[n - 2]) / (h2 * rho[n - 1]);
    } else {
        out[0] = (rho[1] - rho[0]) / (g.dx * rho[0]);
        out[n - 1] = (rho[n - 1] - rho[n - 2]) / (g.dx * rho[n - 1]);
    }
    return out;
}

Field effective_mass(const Grid1D& g, std::span<const double> rho, const PhysicalConstants& k) {
    validate_constants(k);
    Field lg = log_gradient(g, rho);
    const double coef = k.hbar / (2.0 * k.c);
    for (double& v : lg) {
        const double t = coef * v;
        v = std::sqrt(k.m * k.m + t * t);
    }
    return lg;
}

StochasticMomentum stochastic_momentum_field(const Grid1D& g, std::span<const double> rho,
                                             const PhysicalConstants& k) {
    validate_constants(k);
    StochasticMomentum out;
    out.p_st = log_gradient(g, rho);
    out.e_pot.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        out.p_st[i] *= -0.5 * k.hbar;
        out.e_pot[i] = out.p_st[i] * out.p_st[i] / (2.0 * k.m);
    }
    return out;
}

KappaK kappa_K(const Grid1D& g, std::span<const double> rho, const PhysicalConstants& k,
               KappaConvention conv, const std::optional<TimeSamples>& time) {
    validate_constants(k);
    KappaK out;
    const Field lg = log_gradient(g, rho);
    const Field dlg = difference(g, lg);
    out.kappa_x.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) out.kappa_x[i] = 0.5 * lg[i];

    Field time_term(g.n, 0.0);
    if (time) {
        if (!(time->dt > 0.0)) throw ValidationError("time sample spacing must be positive");
        check_rho_floor(g, time->rho_prev, kRhoFloorRel);
        check_rho_floor(g, time->rho_next, kRhoFloorRel);
        Field kt(g.n);
        for (std::size_t i = 0; i < g.n; ++i) {
            const double r = rho[i], rp = time->rho_prev[i], rn = time->rho_next[i];
            const double lt = (rn - rp) / (2.0 * time->dt * r);
            const double ltt = (rn - 2.0 * r + rp) / (time->dt * time->dt * r) - lt * lt;
            kt[i] = 0.5 * lt;
            time_term[i] = 0.5 * ltt + kt[i] * kt[i];
        }
        out.kappa_t = std::move(kt);
    }

    const double lambda = k.hbar / (k.m * k.c);
    const double l2 = lambda * lambda;
    out.K.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double spatial = 0.5 * dlg[i] + out.kappa_x[i] * out.kappa_x[i];
        const double div = conv == KappaConvention::SignatureRaised
                               ? time_term[i] / (k.c * k.c) - spatial
                               : spatial;
        const double radicand = 1.0 + l2 * div;
        if (radicand < 0.0)
            throw DomainError("K at x = " + std::to_string(g.x(i)), radicand);
        out.K[i] = std::sqrt(radicand);
    }
    return out;
}

const char* to_string(KappaConvention c) noexcept {
    return c == KappaConvention::SignatureRaised ? "signature_raised" : "spatial_only";
}

}  // namespace tgeo
