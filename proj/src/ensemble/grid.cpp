#include "tgeo/ensemble/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fft.hpp"
#include "tgeo/error.hpp"

namespace tgeo {

namespace {

// f with two cubic-extrapolated ghost cells on each side
template <class T>
std::vector<T> with_ghosts(std::span<const T> f) {
    const std::size_t n = f.size();
    std::vector<T> g(n + 4);
    for (std::size_t i = 0; i < n; ++i) g[i + 2] = f[i];
    g[1] = 4.0 * g[2] - 6.0 * g[3] + 4.0 * g[4] - g[5];
    g[0] = 4.0 * g[1] - 6.0 * g[2] + 4.0 * g[3] - g[4];
    g[n + 2] = 4.0 * g[n + 1] - 6.0 * g[n] + 4.0 * g[n - 1] - g[n - 2];
    g[n + 3] = 4.0 * g[n + 2] - 6.0 * g[n + 1] + 4.0 * g[n] - g[n - 1];
    return g;
}

template <class T>
std::vector<T> fd_derivative(std::span<const T> f, double dx, int order) {
    const std::vector<T> g = with_ghosts(f);
    std::vector<T> out(f.size());
    if (order == 1) {
        const double s = 1.0 / (12.0 * dx);
        for (std::size_t i = 0; i < f.size(); ++i)
            out[i] = (g[i] - 8.0 * g[i + 1] + 8.0 * g[i + 3] - g[i + 4]) * s;
    } else {
        const double s = 1.0 / (12.0 * dx * dx);
        for (std::size_t i = 0; i < f.size(); ++i)
            out[i] = (-g[i] + 16.0 * g[i + 1] - 30.0 * g[i + 2] + 16.0 * g[i + 3] - g[i + 4]) * s;
    }
    return out;
}

void spectral_apply(const Grid1D& g, CField& z, int order) {
    const auto& fft = detail::cached_fft(g.n);
    const auto k = detail::wavenumbers(g.n, g.length());
    fft.forward(z.data());
    const bool even = g.n % 2 == 0;
    for (std::size_t j = 0; j < g.n; ++j) {
        if (order == 1) {
            // the Nyquist mode has no odd derivative on a real grid
            z[j] *= (even && 2 * j == g.n) ? std::complex<double>(0.0)
                                          : std::complex<double>(0.0, k[j]);
        } else {
            z[j] *= -k[j] * k[j];
        }
    }
    fft.backward(z.data());
}

}  // namespace

Field Grid1D::coordinates() const {
    Field xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = x(i);
    return xs;
}

void Grid1D::validate() const {
    if (n < 8) throw ValidationError("grid needs at least 8 points");
    if (!(dx > 0.0) || !std::isfinite(dx)) throw ValidationError("grid spacing must be positive");
    if (!std::isfinite(x_min)) throw ValidationError("grid origin must be finite");
}

Grid1D make_grid(double lo, double hi, std::size_t n, Boundary b) {
    if (!(hi > lo) || n == 0) throw ValidationError("grid needs hi > lo and n > 0");
    Grid1D g{lo, (hi - lo) / static_cast<double>(n), n, b};
    g.validate();
    return g;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t mid = v.size() / 2;
    return pairwise_sum(v.first(mid)) + pairwise_sum(v.subspan(mid));
}

double integrate(const Grid1D& g, std::span<const double> f) { return g.dx * pairwise_sum(f); }

Field derivative(const Grid1D& g, std::span<const double> f, int order) {
    if (order != 1 && order != 2) throw ValidationError("derivative order must be 1 or 2");
    if (f.size() != g.n) throw ValidationError("field size does not match the grid");
    if (g.boundary == Boundary::Open) return fd_derivative(f, g.dx, order);
    CField z(f.begin(), f.end());
    spectral_apply(g, z, order);
    Field out(g.n);
    for (std::size_t i = 0; i < g.n; ++i) out[i] = z[i].real();
    return out;
}

CField derivative(const Grid1D& g, std::span<const std::complex<double>> f, int order) {
    if (order != 1 && order != 2) throw ValidationError("derivative order must be 1 or 2");
    if (f.size() != g.n) throw ValidationError("field size does not match the grid");
    if (g.boundary == Boundary::Open) return fd_derivative(f, g.dx, order);
    // real and imaginary parts separately keep the Nyquist convention of the real case
    Field re(g.n), im(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        re[i] = f[i].real();
        im[i] = f[i].imag();
    }
    const Field dre = derivative(g, re, order), dim = derivative(g, im, order);
    CField out(g.n);
    for (std::size_t i = 0; i < g.n; ++i) out[i] = {dre[i], dim[i]};
    return out;
}

void fourth_difference_filter(const Grid1D& g, Field& f, double strength) {
    if (f.size() != g.n) throw ValidationError("field size does not match the grid");
    const std::size_t n = g.n;
    std::vector<double> e;
    if (g.boundary == Boundary::Open) {
        e = with_ghosts(std::span<const double>(f));
    } else {
        e.resize(n + 4);
        for (std::size_t i = 0; i < n + 4; ++i) e[i] = f[(i + n - 2) % n];
    }
    const double c = strength / 16.0;
    for (std::size_t i = 0; i < n; ++i)
        f[i] -= c * (e[i] - 4.0 * e[i + 1] + 6.0 * e[i + 2] - 4.0 * e[i + 3] + e[i + 4]);
}

void dealias(const Grid1D& g, Field& f, double jump) {
    if (g.boundary != Boundary::Periodic) throw ValidationError("dealias needs a periodic grid");
    if (f.size() != g.n) throw ValidationError("field size does not match the grid");
    const std::size_t n = g.n;
    const double slope = jump / g.length();
    CField z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = f[i] - slope * (g.x(i) - g.x_min);
    const auto& fft = detail::cached_fft(n);
    fft.forward(z.data());
    for (std::size_t j = 0; j < n; ++j)
        if (3 * std::min(j, n - j) > n) z[j] = 0.0;
    fft.backward(z.data());
    for (std::size_t i = 0; i < n; ++i) f[i] = z[i].real() + slope * (g.x(i) - g.x_min);
}

Field phase_gradient(const Grid1D& g, std::span<const double> phi) {
    if (g.boundary == Boundary::Open) return derivative(g, phi, 1);
    if (phi.size() != g.n) throw ValidationError("field size does not match the grid");
    CField z(g.n);
    for (std::size_t i = 0; i < g.n; ++i) z[i] = std::polar(1.0, phi[i]);
    const CField dz = derivative(g, z, 1);
    Field out(g.n);
    for (std::size_t i = 0; i < g.n; ++i) out[i] = (std::conj(z[i]) * dz[i]).imag();
    return out;
}

void check_field(const Grid1D& g, std::span<const double> f, const char* name) {
    if (f.size() != g.n)
        throw ValidationError(std::string(name) + " has " + std::to_string(f.size()) +
                              " values for a grid of " + std::to_string(g.n));
    for (double v : f)
        if (!std::isfinite(v)) throw ValidationError(std::string(name) + " is not finite");
}

const char* to_string(Boundary b) noexcept {
    return b == Boundary::Periodic ? "periodic" : "open";
}

}  // namespace tgeo
