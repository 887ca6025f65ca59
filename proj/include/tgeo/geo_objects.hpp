#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tgeo/sigma_ops.hpp"
#include "tgeo/worldfunc.hpp"

namespace tgeo {

/// Ordered point tuple anchoring an elementary geometric object.
struct Skeleton {
    std::vector<Point> points;
};

enum class EgoKind { Sphere, Ellipsoid, Segment, Ray, Tube };

/// Elementary geometric object: the zero set of a function of sigma values
/// between the skeleton points and a running point.
struct Ego {
    EgoKind kind;
    Skeleton skeleton;
    WorldFunction wf;

    Ego(EgoKind kind, Skeleton skeleton, WorldFunction wf);
};

/// Defining function f(R). Root forms throw DomainError on a negative radicand.
double ego_value(const Ego& ego, const Point& r);
/// Magnitude f is compared against for membership at R.
double ego_scale(const Ego& ego, const Point& r);
bool ego_contains(const Ego& ego, const Point& r, double tol = kDefaultTol);

double sphere_radius_sq(const WorldFunction& wf, const Point& p0, const Point& q);

/// F2(P0, P1, R): the tube function.
double tube_value(const WorldFunction& wf, const Point& p0, const Point& p1, const Point& r);

// ---------------------------------------------------------------------------
// Spatial directions

using Direction = std::array<double, 3>;

enum class DirectionSampling { Lattice, Random };

/// Maps two uniforms in [0,1) to a unit vector on S^{n-1}, n in {1,2,3}.
Direction unit_direction(std::size_t n_spatial, double u1, double u2);

/// n_directions unit vectors on S^{n-1}: a Fibonacci/equal-angle lattice or
/// seeded uniform random draws.
std::vector<Direction> sphere_directions(std::size_t n_spatial, std::size_t count,
                                         DirectionSampling sampling, std::uint64_t seed = 0);

/// Uniform double in [0,1) from 64 random bits; platform independent.
inline double uniform_from_bits(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Tube / sphere cross-section

struct CrossSectionOptions {
    std::size_t n_directions = 64;
    double tol = kDefaultTol;
    DirectionSampling sampling = DirectionSampling::Lattice;
    std::uint64_t seed = 0;
    /// Initial bracketing samples per direction and time branch (<= 1024).
    std::size_t scan_samples = 1024;
    /// Radial scan extent in units of sqrt(radius_sq), Lorentz kinds only.
    double r_max_factor = 4.0;
    int bisection_iterations = 80;
};

struct CrossSectionSample {
    std::size_t dir_index;
    Parallelism branch;
    Point point;
    double residual_f2;      ///< F2(P0,P1,R)
    double residual_sphere;  ///< sigma(P0,R) - radius_sq/2
};

struct CrossSection {
    Point center;
    SigmaVector direction_link;
    double radius_sq = 0.0;
    std::vector<Point> samples_plus;
    std::vector<Point> samples_minus;
    std::vector<double> residuals;  ///< |F2| per sample, in samples order
    std::vector<CrossSectionSample> samples;
    std::vector<std::size_t> failed_directions;
    double f2_scale = 0.0;  ///< |F2| tolerance is tol * f2_scale
};

/// Frame attached to the link P0 -> P1. Frame coordinates are (tau, r*u):
/// tau along the link's rest-frame time axis (Lorentz kinds) or along the
/// link (Euclidean), u a unit vector in the orthogonal complement.
class LinkFrame {
public:
    LinkFrame(const WorldFunction& wf, const Point& p0, const Point& p1);

    /// Chart displacement of frame coordinates (tau, r*u). For Lorentz kinds
    /// tau is a time (the boost acts on c*tau).
    Point displacement(double tau, double r, const Direction& u) const;
    /// +1 if the link points along +tau, -1 otherwise.
    int link_sign() const noexcept { return link_sign_; }
    std::size_t n_spatial() const noexcept { return dim_ - 1; }

private:
    std::size_t dim_;
    bool lorentz_;
    double c_;
    int link_sign_ = 1;
    std::array<std::array<double, 4>, 4> m_{};  // column j = image of frame axis j
};

struct DirectionRoot {
    double r;
    int tau_sign;
    Point point;
    double f2;
};

/// All roots of F2 along the sphere curve for one direction and one time
/// branch (tau_sign = +1 or -1).
std::vector<DirectionRoot> solve_direction(const WorldFunction& wf, const Point& p0,
                                           const Point& p1, const LinkFrame& frame,
                                           double radius_sq, const Direction& u,
                                           int tau_sign, const CrossSectionOptions& opt);

CrossSection cross_section_solve(const WorldFunction& wf, const Point& p0, const Point& p1,
                                 double radius_sq, const CrossSectionOptions& opt = {});

/// Keeps the first of any group of points closer than eps (chart norm).
std::vector<Point> distinct_points(const std::vector<Point>& pts, double eps);
/// Largest pairwise chart distance.
double diameter(const std::vector<Point>& pts);

// ---------------------------------------------------------------------------
// Grid scans of envelopes

struct ScanBox {
    Point lo;
    Point hi;
    std::vector<std::size_t> resolution;  ///< points per axis, >= 2
};

/// Grid points of the box where the envelope passes within half a cell,
/// in lexicographic order (axis 0 slowest).
std::vector<Point> envelope_grid_scan(const Ego& ego, const ScanBox& box,
                                      double tol = kDefaultTol);

const char* to_string(EgoKind k) noexcept;

}  // namespace tgeo
