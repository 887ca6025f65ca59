#pragma once

#include <vector>

#include "tgeo/ensemble/types.hpp"

namespace tgeo {

/// Strang-split advection of F along the characteristics of a separable
/// H(x, p) = T(p) + V(x) on a doubly periodic grid. Each sub-step moves the
/// rows (or columns) with a conservative flux-limited upwind scheme, which
/// keeps the total mass and the sign of F.
/// Throws ValidationError on a CFL violation and NumericalError if F dips
/// below -1e-12 max F.
PhaseSpaceDensity liouville_evolve(const PhaseSpaceDensity& F, const HamiltonSpec& H, double dt,
                                   std::size_t n_steps);

struct Moments {
    Field rho;               ///< integral of F dp
    Field P;                 ///< mean momentum where reported, else 0
    Field var_p;             ///< momentum variance where reported, else 0
    std::vector<char> mask;  ///< 1 where rho > floor
    std::vector<char> multi_valued;  ///< 1 where sqrt(var_p) > beam_width_tol
    double max_std_p = 0.0;          ///< over masked cells
};

Moments moments_from_F(const PhaseSpaceDensity& F, double beam_width_tol,
                       double floor_rel = kRhoFloorRel);

/// rho0(x) times a normalized Gaussian of width h centered on P0(x).
PhaseSpaceDensity pure_ensemble_density(const Grid1D& xg, const Grid1D& pg, const Field& rho0,
                                        const Field& p0, double h);

}  // namespace tgeo
