#include "tgeo/ensemble/types.hpp"

#include <cmath>
#include <string>

#include "tgeo/error.hpp"

namespace tgeo {

void HamiltonSpec::validate() const {
    if (!(m > 0.0) || !std::isfinite(m)) throw ValidationError("mass must be positive");
    if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("c must be positive");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ValidationError("hbar must be positive");
    if (!std::isfinite(v1) || !std::isfinite(v2))
        throw ValidationError("potential coefficients must be finite");
    if (kind != HamiltonKind::QuadraticPotential && (v1 != 0.0 || v2 != 0.0))
        throw ValidationError("potential coefficients need the quadratic-potential kind");
}

double HamiltonSpec::value(double x, double p) const {
    const double kin = kind == HamiltonKind::FreeRel
                           ? std::sqrt(m * m * c * c * c * c + p * p * c * c)
                           : 0.5 * p * p / m;
    return kin + v1 * x + 0.5 * v2 * x * x;
}

double HamiltonSpec::dh_dp(double p) const {
    if (kind == HamiltonKind::FreeRel) return p * c * c / std::sqrt(m * m * c * c * c * c + p * p * c * c);
    return p / m;
}

double HamiltonSpec::dh_dx(double x) const { return v1 + v2 * x; }

void HydroState::validate() const {
    grid.validate();
    check_field(grid, rho, "rho");
    check_field(grid, phi, "phi");
    for (const Field& l : xi) check_field(grid, l, "xi");
    for (double r : rho)
        if (r < 0.0) throw ValidationError("rho must be nonnegative");
    if (!(b0 > 0.0) || !std::isfinite(b0)) throw ValidationError("b0 must be positive");
}

Field HydroState::momentum() const {
    Field p = phase_gradient(grid, phi);
    for (double& v : p) v *= b0;
    return p;
}

void PsiField::validate() const {
    grid.validate();
    if (components.empty()) throw ValidationError("psi needs at least one component");
    for (const CField& c : components) {
        if (c.size() != grid.n) throw ValidationError("psi component size does not match grid");
        for (const auto& z : c)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw ValidationError("psi is not finite");
    }
    if (!(b0 > 0.0) || !std::isfinite(b0)) throw ValidationError("b0 must be positive");
}

Field PsiField::density() const {
    Field rho(grid.n, 0.0);
    for (const CField& c : components)
        for (std::size_t i = 0; i < grid.n; ++i) rho[i] += std::norm(c[i]);
    return rho;
}

void PhaseSpaceDensity::validate() const {
    x_grid.validate();
    p_grid.validate();
    if (f.size() != x_grid.n * p_grid.n) throw ValidationError("F size does not match its grids");
    for (double v : f)
        if (!std::isfinite(v)) throw ValidationError("F is not finite");
}

double PhaseSpaceDensity::mass() const { return x_grid.dx * p_grid.dx * pairwise_sum(f); }

const char* to_string(HamiltonKind k) noexcept {
    switch (k) {
        case HamiltonKind::FreeNonrel: return "free_nonrel";
        case HamiltonKind::FreeRel: return "free_rel";
        case HamiltonKind::QuadraticPotential: return "quadratic_potential";
    }
    return "?";
}

}  // namespace tgeo
