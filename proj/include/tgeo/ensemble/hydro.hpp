#pragma once

#include "tgeo/ensemble/types.hpp"

namespace tgeo {

/// Evolves the irrotational pure-ensemble fluid: continuity for rho (carried
/// as ln rho), the phase equation b0 dphi/dt + P^2/2m + U_q + V = 0 and
/// passive labels xi. U_q is the quantum potential when `quantum`, else 0;
/// V comes from H and is only allowed for classical runs. RK4 in time.
/// rho is floored at 1e-12 max rho; more than 1% floored cells is a
/// vacuum breakdown (NumericalError).
HydroState hydro_evolve(const HydroState& state, const HamiltonSpec& H, bool quantum, double dt,
                        std::size_t n_steps);

/// Largest dt accepted by hydro_evolve for the given state.
double hydro_max_dt(const HydroState& state, const HamiltonSpec& H, bool quantum);

/// U_q = -(hbar^2/2m) (s''/2 + s'^2/4), s = ln rho.
Field quantum_potential(const Grid1D& g, std::span<const double> rho, double hbar, double m);

/// Discrete sum of (hbar^2/8m) (drho/dx)^2 / rho dx, whose variational
/// derivative is U_q.
double quantum_energy(const Grid1D& g, std::span<const double> rho, double hbar, double m);

}  // namespace tgeo
