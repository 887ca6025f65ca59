#pragma once

#include <optional>
#include <span>

#include "tgeo/ensemble/grid.hpp"
#include "tgeo/worldfunc.hpp"

namespace tgeo {

/// Throws ValidationError at the first cell with rho <= floor * max rho.
void check_rho_floor(const Grid1D& g, std::span<const double> rho, double floor_rel);

/// d ln(rho)/dx from differences of rho divided by the local rho: central in
/// the interior, wrapped on periodic grids, one-sided at open ends.
Field log_gradient(const Grid1D& g, std::span<const double> rho);

/// m_q = sqrt(m^2 + (hbar^2 / 4c^2) (d ln rho/dx)^2)
Field effective_mass(const Grid1D& g, std::span<const double> rho, const PhysicalConstants& k);

struct StochasticMomentum {
    Field p_st;   ///< -(hbar/2) d ln rho/dx
    Field e_pot;  ///< p_st^2 / 2m
};
StochasticMomentum stochastic_momentum_field(const Grid1D& g, std::span<const double> rho,
                                             const PhysicalConstants& k);

/// Index bookkeeping for d_l kappa^l + kappa^l kappa_l with metric
/// diag(c^2, -1): SignatureRaised uses the metric (spatial terms negated,
/// time terms divided by c^2); SpatialOnly uses the spatial terms with a
/// plus sign and ignores time.
enum class KappaConvention { SignatureRaised, SpatialOnly };

/// rho one step dt before and after the main sample, for time derivatives.
struct TimeSamples {
    Field rho_prev;
    Field rho_next;
    double dt = 0.0;
};

struct KappaK {
    Field kappa_x;                ///< (1/2) d ln rho/dx
    std::optional<Field> kappa_t; ///< (1/2) d ln rho/dt
    Field K;                      ///< sqrt(1 + lambda^2 (d_l kappa^l + kappa^l kappa_l))
};

/// lambda = hbar/(m c). A negative radicand throws DomainError naming the cell.
KappaK kappa_K(const Grid1D& g, std::span<const double> rho, const PhysicalConstants& k,
               KappaConvention conv, const std::optional<TimeSamples>& time = std::nullopt);

const char* to_string(KappaConvention c) noexcept;

}  // namespace tgeo
