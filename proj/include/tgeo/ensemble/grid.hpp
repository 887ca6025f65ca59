#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tgeo {

using Field = std::vector<double>;
using CField = std::vector<std::complex<double>>;

/// Periodic grids use spectral derivatives; open grids use fourth-order
/// central differences with cubic extrapolation into two ghost cells.
enum class Boundary { Periodic, Open };

struct Grid1D {
    double x_min = 0.0;
    double dx = 1.0;
    std::size_t n = 0;
    Boundary boundary = Boundary::Periodic;

    double x(std::size_t i) const noexcept { return x_min + static_cast<double>(i) * dx; }
    double length() const noexcept { return static_cast<double>(n) * dx; }
    Field coordinates() const;
    /// Throws ValidationError unless n >= 8, dx > 0 and x_min finite.
    void validate() const;
    bool operator==(const Grid1D&) const = default;
};

/// Cell-centered grid of n points covering [lo, hi).
Grid1D make_grid(double lo, double hi, std::size_t n, Boundary b = Boundary::Periodic);

/// Fixed-order pairwise sum.
double pairwise_sum(std::span<const double> v);
/// dx * sum(f), pairwise.
double integrate(const Grid1D& g, std::span<const double> f);

/// d^order f / dx^order, order in {1, 2}.
Field derivative(const Grid1D& g, std::span<const double> f, int order = 1);
CField derivative(const Grid1D& g, std::span<const std::complex<double>> f, int order = 1);

/// f <- f - (strength/16) D4 f with D4 the fourth difference (cubic
/// extrapolation at open ends). Damps grid-scale modes, leaves cubics
/// untouched.
void fourth_difference_filter(const Grid1D& g, Field& f, double strength);

/// Periodic grids only: removes the top third of the wavenumbers of f (the
/// 2/3 rule). f may grow by `jump` over one period, f(x + L) = f(x) + jump;
/// the linear trend is taken out before the transform and restored after.
void dealias(const Grid1D& g, Field& f, double jump = 0.0);

/// d phi/dx for a phase that may wind: on periodic grids through the phasor,
/// Im(conj(z) dz/dx) with z = e^{i phi}; on open grids directly.
Field phase_gradient(const Grid1D& g, std::span<const double> phi);

/// Throws ValidationError if the field length differs from the grid size or
/// a value is not finite.
void check_field(const Grid1D& g, std::span<const double> f, const char* name);

const char* to_string(Boundary b) noexcept;

}  // namespace tgeo
