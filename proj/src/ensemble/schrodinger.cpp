#include "tgeo/ensemble/schrodinger.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "tgeo/error.hpp"

namespace tgeo {

PsiField schrodinger_evolve(const PsiField& psi, double m, double hbar, double dt,
                            std::size_t n_steps) {
    psi.validate();
    if (psi.k() != 1) throw ValidationError("schrodinger_evolve needs a single component");
    if (psi.grid.boundary != Boundary::Periodic)
        throw ValidationError("schrodinger_evolve needs a periodic grid");
    if (!(m > 0.0) || !(hbar > 0.0)) throw ValidationError("m and hbar must be positive");
    if (psi.b0 != hbar) throw ValidationError("the linear equation requires b0 == hbar");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");

    const std::size_t n = psi.grid.n;
    const auto& fft = detail::cached_fft(n);
    const auto k = detail::wavenumbers(n, psi.grid.length());
    CField prop(n);
    for (std::size_t j = 0; j < n; ++j) prop[j] = std::polar(1.0, -hbar * k[j] * k[j] * dt / (2.0 * m));

    PsiField out = psi;
    CField& z = out.components[0];
    for (std::size_t s = 0; s < n_steps; ++s) {
        fft.forward(z.data());
        for (std::size_t j = 0; j < n; ++j) z[j] *= prop[j];
        fft.backward(z.data());
    }
    out.t = psi.t + static_cast<double>(n_steps) * dt;
    return out;
}

PsiField gaussian_packet(const Grid1D& g, double x0, double sigma0, double p0, double hbar) {
    g.validate();
    if (!(sigma0 > 0.0) || !(hbar > 0.0)) throw ValidationError("sigma0 and hbar must be positive");
    PsiField psi;
    psi.grid = g;
    psi.b0 = hbar;
    CField c(g.n);
    const double norm = std::pow(2.0 * std::numbers::pi * sigma0 * sigma0, -0.25);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double d = g.x(i) - x0;
        c[i] = std::polar(norm * std::exp(-d * d / (4.0 * sigma0 * sigma0)), p0 * g.x(i) / hbar);
    }
    psi.components.push_back(std::move(c));
    return psi;
}

}  // namespace tgeo
