#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>

namespace tgeo {

/// Space-time point in a fixed chart: coords[0] is t, the rest are spatial.
/// Total dimension is 2, 3 or 4 and is chosen at runtime.
class Point {
public:
    static constexpr std::size_t kMaxDim = 4;

    Point() = default;
    explicit Point(std::span<const double> coords);
    Point(std::initializer_list<double> coords);

    std::size_t dim() const noexcept { return dim_; }
    double operator[](std::size_t i) const noexcept { return c_[i]; }
    double& operator[](std::size_t i) noexcept { return c_[i]; }
    double t() const noexcept { return c_[0]; }
    std::span<const double> coords() const noexcept { return {c_.data(), dim_}; }

    friend bool operator==(const Point& a, const Point& b) noexcept;

private:
    std::array<double, kMaxDim> c_{};
    std::size_t dim_ = 0;
};

/// Chart difference a - b.
Point operator-(const Point& a, const Point& b);
Point operator+(const Point& a, const Point& b);
Point operator*(double s, const Point& a);

/// Euclidean norm of the chart coordinates (all components).
double chart_norm(const Point& a);

struct PhysicalConstants {
    double c = 1.0;
    double hbar = 1.0;
    double b = 1.0;
    double m = 1.0;

    void validate() const;
};

enum class Ramp { Step, Linear, SmoothStep };

/// D(sigma_M): 0 for sigma_M <= 0, d above sigma0, ramp in between.
struct DistortionProfile {
    double d = 0.0;
    double sigma0 = 1.0;
    Ramp ramp = Ramp::Linear;

    void validate() const;
    double operator()(double sigma_m) const noexcept;
    /// Inverse of sigma_M -> sigma_M + D(sigma_M). Returns false when the
    /// value falls inside a jump of the profile.
    bool invert(double sigma, double& sigma_m) const noexcept;
};

enum class WorldKind { Euclidean, Minkowski, DistortedMinkowski };

/// Symmetric two-point function sigma(P, Q). Immutable after construction.
class WorldFunction {
public:
    static WorldFunction euclidean(std::size_t dim);
    static WorldFunction minkowski(std::size_t dim, double c = 1.0);
    static WorldFunction distorted(std::size_t dim, double c, DistortionProfile profile);

    WorldKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    double c() const noexcept { return c_; }
    const DistortionProfile& profile() const noexcept { return profile_; }

    /// Validates dimensions and finiteness.
    double operator()(const Point& p, const Point& q) const;
    /// The undistorted part (Minkowski or Euclidean) without checks.
    double base(const Point& p, const Point& q) const noexcept;
    /// Correction applied on top of base().
    double distortion(double base_value) const noexcept;
    /// Solves base + distortion(base) = sigma for base. False inside a jump.
    bool invert(double sigma, double& base_value) const noexcept;

    bool has_lorentz_signature() const noexcept { return kind_ != WorldKind::Euclidean; }

private:
    WorldFunction(WorldKind kind, std::size_t dim, double c, DistortionProfile profile);

    WorldKind kind_;
    std::size_t dim_;
    double c_;
    DistortionProfile profile_;
};

/// d = hbar / (2 b c).
double derive_distortion_scale(const PhysicalConstants& constants);

const char* to_string(Ramp r) noexcept;
const char* to_string(WorldKind k) noexcept;

}  // namespace tgeo
