#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace tgeo::detail {

/// In-place complex DFT of fixed length. Plans are created with
/// FFTW_ESTIMATE so transforms are bitwise reproducible.
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::size_t size() const noexcept { return n_; }
    /// Unnormalized forward transform (exponent -i).
    void forward(std::complex<double>* data) const;
    /// Inverse transform including the 1/n factor.
    void backward(std::complex<double>* data) const;

private:
    std::size_t n_;
    void* fwd_ = nullptr;
    void* bwd_ = nullptr;
};

/// Process-wide plan for length n; executing it is thread safe.
const Fft& cached_fft(std::size_t n);

/// Angular wavenumbers 2 pi j / L in FFT order; the Nyquist entry is
/// reported as negative.
std::vector<double> wavenumbers(std::size_t n, double length);

}  // namespace tgeo::detail
