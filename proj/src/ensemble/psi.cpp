#include "tgeo/ensemble/psi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tgeo/ensemble/evaluators.hpp"
#include "tgeo/error.hpp"

namespace tgeo {

namespace {

double ulp_step(double x, int k) {
    const double dir = k > 0 ? INFINITY : -INFINITY;
    for (int i = 0; i < std::abs(k); ++i) x = std::nextafter(x, dir);
    return x;
}

void check_psi_floor(const PsiField& psi, double floor_rel) {
    const Field rho = psi.density();
    check_rho_floor(psi.grid, rho, floor_rel);
}

}  // namespace

std::complex<double> polar_with_norm(double norm_target, double phase) {
    const double r = std::sqrt(norm_target);
    const std::complex<double> plain(r * std::cos(phase), r * std::sin(phase));
    if (std::norm(plain) == norm_target || !(norm_target > 0.0)) return plain;
    // step the larger component and re-solve the smaller one from the target
    const bool swap = std::abs(plain.imag()) > std::abs(plain.real());
    const double big = swap ? plain.imag() : plain.real();
    const double small = swap ? plain.real() : plain.imag();
    auto make = [&](double b, double s) {
        return swap ? std::complex<double>(s, b) : std::complex<double>(b, s);
    };
    // candidates must stay close to the plain value so the phase barely moves
    const double tol = 1e-13 * r;
    for (int s = 0; s <= 32; ++s) {
        for (int sgn : {1, -1}) {
            if (s == 0 && sgn < 0) continue;
            const double b = ulp_step(big, sgn * s);
            const double rest = std::fma(-b, b, norm_target);
            const double s0 = std::copysign(std::sqrt(std::max(0.0, rest)), small);
            for (double base : {s0, small}) {
                if (std::abs(base - small) > tol) continue;
                for (int k = -4; k <= 4; ++k) {
                    const std::complex<double> z = make(b, ulp_step(base, k));
                    if (std::norm(z) == norm_target) return z;
                }
            }
        }
    }
    return plain;
}

PsiField psi_from_clebsch(const HydroState& s) {
    s.validate();
    PsiField psi;
    psi.grid = s.grid;
    psi.b0 = s.b0;
    psi.t = s.t;
    CField c(s.grid.n);
    for (std::size_t i = 0; i < s.grid.n; ++i) c[i] = polar_with_norm(s.rho[i], s.phi[i]);
    psi.components.push_back(std::move(c));
    return psi;
}

Field unwrap_phase(const CField& z) {
    Field out(z.size());
    if (z.empty()) return out;
    out[0] = std::arg(z[0]);
    for (std::size_t i = 1; i < z.size(); ++i) {
        const double step = std::remainder(std::arg(z[i]) - std::arg(z[i - 1]),
                                           2.0 * std::numbers::pi);
        out[i] = out[i - 1] + step;
    }
    return out;
}

ClebschState clebsch_from_psi(const PsiField& psi, double floor_rel) {
    psi.validate();
    if (psi.k() != 1) throw ValidationError("clebsch_from_psi needs a single component");
    check_psi_floor(psi, floor_rel);
    const CField& z = psi.components[0];
    ClebschState out;
    out.state.grid = psi.grid;
    out.state.b0 = psi.b0;
    out.state.t = psi.t;
    out.state.rho = psi.density();
    out.state.phi = unwrap_phase(z);
    const CField dz = derivative(psi.grid, z, 1);
    out.P.resize(psi.grid.n);
    for (std::size_t i = 0; i < psi.grid.n; ++i)
        out.P[i] = psi.b0 * (std::conj(z[i]) * dz[i]).imag() / out.state.rho[i];
    return out;
}

std::vector<std::vector<CField>> q_vorticity(const PsiField& psi, double floor_rel) {
    psi.validate();
    check_psi_floor(psi, floor_rel);
    const std::size_t k = psi.k(), n = psi.grid.n;
    const Field rho = psi.density();
    std::vector<CField> d(k);
    for (std::size_t a = 0; a < k; ++a) d[a] = derivative(psi.grid, psi.components[a], 1);
    std::vector<std::vector<CField>> q(k, std::vector<CField>(k, CField(n)));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            for (std::size_t i = 0; i < n; ++i) {
                const auto& pa = psi.components[a][i];
                const auto& pb = psi.components[b][i];
                q[a][b][i] = (pa * d[b][i] - pb * d[a][i]) / rho[i];
            }
    return q;
}

PsiField phase_rescale(const PsiField& psi, double b0_new, double floor_rel) {
    psi.validate();
    if (!(b0_new > 0.0) || !std::isfinite(b0_new)) throw ValidationError("b0 must be positive");
    check_psi_floor(psi, floor_rel);
    PsiField out = psi;
    out.b0 = b0_new;
    if (b0_new == psi.b0) return out;
    const double ratio = b0_new / psi.b0;
    for (CField& c : out.components) {
        const Field ph = unwrap_phase(c);
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] = polar_with_norm(std::norm(c[i]), ratio * ph[i]);
    }
    return out;
}

}  // namespace tgeo
