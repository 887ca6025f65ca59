#pragma once

#include "tgeo/ensemble/types.hpp"

namespace tgeo {

/// Free evolution i hbar dpsi/dt = -(hbar^2/2m) d^2psi/dx^2 on a periodic
/// grid by the exact Fourier propagator, one multiplication per step.
/// Requires a single component and b0 == hbar.
PsiField schrodinger_evolve(const PsiField& psi, double m, double hbar, double dt,
                            std::size_t n_steps);

/// Gaussian packet sqrt(rho) with rho ~ N(x0, sigma0^2) and momentum p0 (b0 = hbar).
PsiField gaussian_packet(const Grid1D& g, double x0, double sigma0, double p0, double hbar);

}  // namespace tgeo
