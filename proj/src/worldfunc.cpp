#include "tgeo/worldfunc.hpp"

#include <cmath>
#include <string>

#include "tgeo/error.hpp"

namespace tgeo {

namespace {

void check_dim(std::size_t n) {
    if (n < 2 || n > Point::kMaxDim)
        throw ValidationError("point dimension must be 2, 3 or 4, got " + std::to_string(n));
}

}  // namespace

Point::Point(std::span<const double> coords) : dim_(coords.size()) {
    check_dim(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        if (!std::isfinite(coords[i])) throw ValidationError("non-finite point coordinate");
        c_[i] = coords[i];
    }
}

Point::Point(std::initializer_list<double> coords)
    : Point(std::span<const double>(coords.begin(), coords.size())) {}

bool operator==(const Point& a, const Point& b) noexcept {
    if (a.dim_ != b.dim_) return false;
    for (std::size_t i = 0; i < a.dim_; ++i)
        if (a.c_[i] != b.c_[i]) return false;
    return true;
}

Point operator-(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) throw ValidationError("point dimension mismatch");
    Point r = a;
    for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
    return r;
}

Point operator+(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) throw ValidationError("point dimension mismatch");
    Point r = a;
    for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
    return r;
}

Point operator*(double s, const Point& a) {
    Point r = a;
    for (std::size_t i = 0; i < a.dim(); ++i) r[i] = s * a[i];
    return r;
}

double chart_norm(const Point& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * a[i];
    return std::sqrt(s);
}

void PhysicalConstants::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(c) || !positive(hbar) || !positive(b) || !positive(m))
        throw ValidationError("physical constants must be finite and strictly positive");
}

void DistortionProfile::validate() const {
    if (!std::isfinite(d) || d < 0.0) throw ValidationError("distortion d must be >= 0");
    if (!std::isfinite(sigma0) || sigma0 <= 0.0) throw ValidationError("sigma0 must be > 0");
}

double DistortionProfile::operator()(double sm) const noexcept {
    if (sm <= 0.0 || d == 0.0) return 0.0;
    if (sm > sigma0) return d;
    const double u = sm / sigma0;
    switch (ramp) {
        case Ramp::Step: return d;
        case Ramp::Linear: return d * u;
        case Ramp::SmoothStep: return d * u * u * (3.0 - 2.0 * u);
    }
    return d;
}

bool DistortionProfile::invert(double sigma, double& sm) const noexcept {
    if (sigma <= 0.0 || d == 0.0) {
        sm = sigma;
        return true;
    }
    if (sigma > sigma0 + d) {
        sm = sigma - d;
        return true;
    }
    switch (ramp) {
        case Ramp::Step:
            if (sigma > d) {
                sm = sigma - d;
                return true;
            }
            sm = 0.0;
            return false;
        case Ramp::Linear:
            sm = sigma / (1.0 + d / sigma0);
            return true;
        case Ramp::SmoothStep: {
            // s + D(s) is strictly increasing on [0, sigma0]
            double lo = 0.0, hi = sigma0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                if (mid + (*this)(mid) < sigma) lo = mid;
                else hi = mid;
            }
            sm = 0.5 * (lo + hi);
            return true;
        }
    }
    return false;
}

WorldFunction::WorldFunction(WorldKind kind, std::size_t dim, double c, DistortionProfile profile)
    : kind_(kind), dim_(dim), c_(c), profile_(profile) {
    check_dim(dim);
    if (!std::isfinite(c) || c <= 0.0) throw ValidationError("speed of light must be > 0");
    profile_.validate();
}

WorldFunction WorldFunction::euclidean(std::size_t dim) {
    return {WorldKind::Euclidean, dim, 1.0, DistortionProfile{}};
}

WorldFunction WorldFunction::minkowski(std::size_t dim, double c) {
    return {WorldKind::Minkowski, dim, c, DistortionProfile{}};
}

WorldFunction WorldFunction::distorted(std::size_t dim, double c, DistortionProfile profile) {
    return {WorldKind::DistortedMinkowski, dim, c, profile};
}

double WorldFunction::base(const Point& p, const Point& q) const noexcept {
    if (kind_ == WorldKind::Euclidean) {
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            const double dx = p[i] - q[i];
            s += dx * dx;
        }
        return 0.5 * s;
    }
    const double dt = p[0] - q[0];
    double space = 0.0;
    for (std::size_t i = 1; i < dim_; ++i) {
        const double dx = p[i] - q[i];
        space += dx * dx;
    }
    return 0.5 * (c_ * c_ * dt * dt - space);
}

double WorldFunction::distortion(double base_value) const noexcept {
    if (kind_ != WorldKind::DistortedMinkowski) return 0.0;
    return profile_(base_value);
}

bool WorldFunction::invert(double sigma, double& base_value) const noexcept {
    if (kind_ != WorldKind::DistortedMinkowski) {
        base_value = sigma;
        return true;
    }
    return profile_.invert(sigma, base_value);
}

double WorldFunction::operator()(const Point& p, const Point& q) const {
    if (p.dim() != dim_ || q.dim() != dim_)
        throw ValidationError("point dimension does not match the world function");
    const double sm = base(p, q);
    if (!std::isfinite(sm)) throw ValidationError("non-finite world function value");
    const double corr = distortion(sm);
    return corr == 0.0 ? sm : sm + corr;
}

double derive_distortion_scale(const PhysicalConstants& k) {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(k.hbar) || !positive(k.b) || !positive(k.c))
        throw ValidationError("hbar, b and c must be strictly positive");
    return k.hbar / (2.0 * k.b * k.c);
}

const char* to_string(Ramp r) noexcept {
    switch (r) {
        case Ramp::Step: return "step";
        case Ramp::Linear: return "linear";
        case Ramp::SmoothStep: return "smoothstep";
    }
    return "?";
}

const char* to_string(WorldKind k) noexcept {
    switch (k) {
        case WorldKind::Euclidean: return "euclidean";
        case WorldKind::Minkowski: return "minkowski";
        case WorldKind::DistortedMinkowski: return "distorted_minkowski";
    }
    return "?";
}

}  // namespace tgeo
