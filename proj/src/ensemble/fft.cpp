#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace tgeo::detail {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
    std::vector<std::complex<double>> scratch(n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(planner_mutex());
    fwd_ = fftw_plan_dft_1d(len, p, p, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_1d(len, p, p, FFTW_BACKWARD, flags);
}

Fft::~Fft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft::forward(std::complex<double>* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

void Fft::backward(std::complex<double>* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(bwd_), p, p);
    const double s = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) data[i] *= s;
}

const Fft& cached_fft(std::size_t n) {
    static std::mutex m;
    static std::map<std::size_t, std::unique_ptr<Fft>> cache;
    std::lock_guard lock(m);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Fft>(n);
    return *slot;
}

std::vector<double> wavenumbers(std::size_t n, double length) {
    std::vector<double> k(n);
    const double base = 2.0 * std::numbers::pi / length;
    for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<long long>(j);
        const auto nn = static_cast<long long>(n);
        k[j] = base * static_cast<double>(2 * jj < nn ? jj : jj - nn);
    }
    return k;
}

}  // namespace tgeo::detail
