#pragma once

#include <complex>
#include <vector>

#include "tgeo/ensemble/types.hpp"

namespace tgeo {

/// Hydrodynamic state recovered from psi; P comes from the current formula
/// P = b0 Im(psi* dpsi) / |psi|^2 and does not rely on the unwrapped phase.
struct ClebschState {
    HydroState state;
    Field P;
};

/// A complex number with phase close to `phase` whose std::norm equals
/// norm_target bit for bit when such a number exists within a few ulp of
/// sqrt(norm_target) e^{i phase}; otherwise the plainly rounded value.
std::complex<double> polar_with_norm(double norm_target, double phase);

/// psi = sqrt(rho) e^{i phi} (k = 1, u = 1).
PsiField psi_from_clebsch(const HydroState& s);

/// rho = |psi|^2, phi = unwrapped arg psi (recovered modulo 2 pi).
ClebschState clebsch_from_psi(const PsiField& psi, double floor_rel = kRhoFloorRel);

/// arg z along the grid with jumps folded into (-pi, pi].
Field unwrap_phase(const CField& z);

/// Q[a][b][i] = (psi_a dpsi_b - psi_b dpsi_a) / (psi* psi) at grid point i.
std::vector<std::vector<CField>> q_vorticity(const PsiField& psi,
                                             double floor_rel = kRhoFloorRel);

/// psi~ = |psi| exp(i (b0_new/b0) arg psi), phase unwrapped per component.
PsiField phase_rescale(const PsiField& psi, double b0_new, double floor_rel = kRhoFloorRel);

}  // namespace tgeo
