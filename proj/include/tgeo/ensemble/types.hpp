#pragma once

#include <optional>
#include <vector>

#include "tgeo/ensemble/grid.hpp"

namespace tgeo {

/// Density floor relative to max rho.
inline constexpr double kRhoFloorRel = 1e-12;

enum class HamiltonKind { FreeNonrel, FreeRel, QuadraticPotential };

/// H(x, p) = T(p) + V(x). T is p^2/2m, or sqrt(m^2c^4 + p^2c^2) for FreeRel.
/// V = v1 x + v2 x^2 / 2 for QuadraticPotential, zero otherwise.
struct HamiltonSpec {
    HamiltonKind kind = HamiltonKind::FreeNonrel;
    double m = 1.0;
    double c = 1.0;
    double hbar = 1.0;
    double v1 = 0.0;
    double v2 = 0.0;

    void validate() const;
    double value(double x, double p) const;
    double dh_dp(double p) const;
    double dh_dx(double x) const;
    bool has_potential() const noexcept {
        return kind == HamiltonKind::QuadraticPotential && (v1 != 0.0 || v2 != 0.0);
    }
};

/// Pure-ensemble hydrodynamic state on a 1D grid. Momentum P = b0 dphi/dx.
struct HydroState {
    Grid1D grid;
    Field rho;
    Field phi;
    std::vector<Field> xi;  ///< passive labels
    double b0 = 1.0;
    double t = 0.0;

    void validate() const;
    Field momentum() const;
};

/// k-component wave function; components[a][i].
struct PsiField {
    Grid1D grid;
    std::vector<CField> components;
    double b0 = 1.0;
    double t = 0.0;

    std::size_t k() const noexcept { return components.size(); }
    void validate() const;
    /// sum_a |psi_a|^2
    Field density() const;
};

/// Phase-space density F(x_i, p_j) stored row-major: f[j * nx + i].
struct PhaseSpaceDensity {
    Grid1D x_grid;
    Grid1D p_grid;
    std::vector<double> f;
    double t = 0.0;

    double& at(std::size_t ix, std::size_t jp) { return f[jp * x_grid.n + ix]; }
    double at(std::size_t ix, std::size_t jp) const { return f[jp * x_grid.n + ix]; }
    void validate() const;
    double mass() const;
};

const char* to_string(HamiltonKind k) noexcept;

}  // namespace tgeo
