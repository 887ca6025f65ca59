#include "tgeo/geo_objects.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "tgeo/error.hpp"

namespace tgeo {

namespace {

double root_of(double two_sigma, const char* term) {
    if (two_sigma < 0.0) throw DomainError(term, two_sigma);
    return std::sqrt(two_sigma);
}

std::size_t required_points(EgoKind k) { return k == EgoKind::Ellipsoid ? 3 : 2; }

}  // namespace

Ego::Ego(EgoKind k, Skeleton sk, WorldFunction w)
    : kind(k), skeleton(std::move(sk)), wf(std::move(w)) {
    if (skeleton.points.size() != required_points(kind))
        throw ValidationError(std::string(to_string(kind)) + " needs " +
                              std::to_string(required_points(kind)) + " skeleton points");
    for (const Point& p : skeleton.points)
        if (p.dim() != wf.dim()) throw ValidationError("skeleton point dimension mismatch");
}

double tube_value(const WorldFunction& wf, const Point& p0, const Point& p1, const Point& r) {
    const double a = wf(p0, p1);
    const double b = wf(p0, r);
    const double c = wf(p1, r);
    const double prod = (a + b) - c;
    return (2.0 * a) * (2.0 * b) - prod * prod;
}

double ego_value(const Ego& ego, const Point& r) {
    const auto& p = ego.skeleton.points;
    const WorldFunction& wf = ego.wf;
    switch (ego.kind) {
        case EgoKind::Sphere:
            return root_of(2.0 * wf(p[0], p[1]), "sigma(P0,P1)") -
                   root_of(2.0 * wf(p[0], r), "sigma(P0,R)");
        case EgoKind::Ellipsoid:
            return root_of(2.0 * wf(p[0], p[2]), "sigma(P0,P2)") +
                   root_of(2.0 * wf(p[1], p[2]), "sigma(P1,P2)") -
                   root_of(2.0 * wf(p[0], r), "sigma(P0,R)") -
                   root_of(2.0 * wf(p[1], r), "sigma(P1,R)");
        case EgoKind::Segment:
            return root_of(2.0 * wf(p[0], p[1]), "sigma(P0,P1)") -
                   root_of(2.0 * wf(p[0], r), "sigma(P0,R)") -
                   root_of(2.0 * wf(p[1], r), "sigma(P1,R)");
        case EgoKind::Ray:
            return root_of(2.0 * wf(p[0], r), "sigma(P0,R)") -
                   root_of(2.0 * wf(p[0], p[1]), "sigma(P0,P1)") -
                   root_of(2.0 * wf(p[1], r), "sigma(P1,R)");
        case EgoKind::Tube:
            return tube_value(wf, p[0], p[1], r);
    }
    return 0.0;
}

double ego_scale(const Ego& ego, const Point& r) {
    const auto& p = ego.skeleton.points;
    const WorldFunction& wf = ego.wf;
    switch (ego.kind) {
        case EgoKind::Sphere:
        case EgoKind::Segment:
        case EgoKind::Ray:
            return std::sqrt(std::abs(2.0 * wf(p[0], p[1])));
        case EgoKind::Ellipsoid:
            return std::sqrt(std::abs(2.0 * wf(p[0], p[2]))) +
                   std::sqrt(std::abs(2.0 * wf(p[1], p[2])));
        case EgoKind::Tube:
            return std::abs(2.0 * wf(p[0], p[1])) * std::abs(2.0 * wf(p[0], r));
    }
    return 1.0;
}

bool ego_contains(const Ego& ego, const Point& r, double tol) {
    return std::abs(ego_value(ego, r)) <= tol * ego_scale(ego, r);
}

double sphere_radius_sq(const WorldFunction& wf, const Point& p0, const Point& q) {
    return squared_length(wf, SigmaVector{p0, q});
}

// ---------------------------------------------------------------------------

Direction unit_direction(std::size_t n, double u1, double u2) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    switch (n) {
        case 1: return {u1 < 0.5 ? 1.0 : -1.0, 0.0, 0.0};
        case 2: return {std::cos(two_pi * u1), std::sin(two_pi * u1), 0.0};
        case 3: {
            const double z = 1.0 - 2.0 * u1;
            const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            return {s * std::cos(two_pi * u2), s * std::sin(two_pi * u2), z};
        }
        default: throw ValidationError("spatial dimension must be 1, 2 or 3");
    }
}

std::vector<Direction> sphere_directions(std::size_t n, std::size_t count,
                                         DirectionSampling sampling, std::uint64_t seed) {
    if (n < 1 || n > 3) throw ValidationError("spatial dimension must be 1, 2 or 3");
    std::vector<Direction> out;
    out.reserve(count);
    if (sampling == DirectionSampling::Random) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
        std::mt19937_64 rng(seq);
        for (std::size_t i = 0; i < count; ++i) {
            const double u1 = uniform_from_bits(rng());
            const double u2 = uniform_from_bits(rng());
            out.push_back(unit_direction(n, u1, u2));
        }
        return out;
    }
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
        const double fi = static_cast<double>(i);
        const double fn = static_cast<double>(count);
        switch (n) {
            case 1: out.push_back({i % 2 == 0 ? 1.0 : -1.0, 0.0, 0.0}); break;
            case 2: {
                const double a = 2.0 * std::numbers::pi * (fi + 0.5) / fn;
                out.push_back({std::cos(a), std::sin(a), 0.0});
                break;
            }
            default: {
                const double z = 1.0 - (2.0 * fi + 1.0) / fn;
                const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
                const double a = golden * fi;
                out.push_back({s * std::cos(a), s * std::sin(a), z});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

LinkFrame::LinkFrame(const WorldFunction& wf, const Point& p0, const Point& p1)
    : dim_(wf.dim()), lorentz_(wf.has_lorentz_signature()), c_(wf.c()) {
    if (p0.dim() != dim_ || p1.dim() != dim_) throw ValidationError("link dimension mismatch");
    if (p0 == p1) throw ValidationError("link endpoints coincide");
    std::array<double, 4> w{};
    for (std::size_t i = 0; i < dim_; ++i) w[i] = p1[i] - p0[i];
    if (lorentz_) {
        w[0] *= c_;
        double space = 0.0;
        for (std::size_t i = 1; i < dim_; ++i) space += w[i] * w[i];
        const double s2 = w[0] * w[0] - space;
        if (!(s2 > 0.0)) throw ValidationError("link is not timelike");
        const double s = std::sqrt(s2);
        link_sign_ = w[0] > 0.0 ? 1 : -1;
        std::array<double, 4> u{};
        for (std::size_t i = 0; i < dim_; ++i) u[i] = link_sign_ * w[i] / s;
        const double gamma = u[0];
        for (std::size_t i = 0; i < dim_; ++i) m_[i][0] = u[i];
        for (std::size_t j = 1; j < dim_; ++j) {
            m_[0][j] = u[j];
            for (std::size_t i = 1; i < dim_; ++i)
                m_[i][j] = (i == j ? 1.0 : 0.0) + u[i] * u[j] / (1.0 + gamma);
        }
    } else {
        // Householder reflection taking axis 0 onto the link direction
        double norm = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) norm += w[i] * w[i];
        norm = std::sqrt(norm);
        std::array<double, 4> v{};
        double vv = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            v[i] = (i == 0 ? 1.0 : 0.0) - w[i] / norm;
            vv += v[i] * v[i];
        }
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                m_[i][j] = (i == j ? 1.0 : 0.0) - (vv > 0.0 ? 2.0 * v[i] * v[j] / vv : 0.0);
    }
}

Point LinkFrame::displacement(double tau, double r, const Direction& u) const {
    std::array<double, 4> f{};
    f[0] = lorentz_ ? c_ * tau : tau;
    for (std::size_t j = 1; j < dim_; ++j) f[j] = r * u[j - 1];
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < dim_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) s += m_[i][j] * f[j];
        out[i] = s;
    }
    if (lorentz_) out[0] /= c_;
    return Point(std::span<const double>(out.data(), dim_));
}

namespace {

struct SphereCurve {
    bool lorentz;
    double c;
    double base;  // undistorted sigma on the sphere
    double r_max;

    /// tau on the sphere for spatial frame radius r, or NaN if none.
    double tau(double r) const {
        if (lorentz) return std::sqrt(2.0 * base + r * r) / c;
        const double q = 2.0 * base - r * r;
        return q >= 0.0 ? std::sqrt(q) : std::nan("");
    }
};

SphereCurve make_curve(const WorldFunction& wf, double radius_sq, double r_max_factor) {
    double base = 0.0;
    if (!wf.invert(0.5 * radius_sq, base) || !(base > 0.0))
        throw NumericalError("sphere of the requested radius is empty under this distortion");
    SphereCurve sc{wf.has_lorentz_signature(), wf.c(), base, 0.0};
    sc.r_max = sc.lorentz ? r_max_factor * std::sqrt(radius_sq) : std::sqrt(2.0 * base);
    return sc;
}

}  // namespace

std::vector<DirectionRoot> solve_direction(const WorldFunction& wf, const Point& p0,
                                           const Point& p1, const LinkFrame& frame,
                                           double radius_sq, const Direction& u, int tau_sign,
                                           const CrossSectionOptions& opt) {
    const SphereCurve curve = make_curve(wf, radius_sq, opt.r_max_factor);
    const double a = wf(p0, p1);
    const double b_target = 0.5 * radius_sq;
    const double scale = std::abs(4.0 * a * b_target);
    const double tol_abs = opt.tol * scale;

    auto point_at = [&](double r) {
        return p0 + frame.displacement(tau_sign * curve.tau(r), r, u);
    };
    auto f2_at = [&](double r) {
        const Point rp = point_at(r);
        const double b = wf(p0, rp);
        const double c = wf(p1, rp);
        const double prod = (a + b) - c;
        return (2.0 * a) * (2.0 * b) - prod * prod;
    };

    const std::size_t k_max = std::clamp<std::size_t>(opt.scan_samples, 2, 1024);
    std::vector<DirectionRoot> roots;
    auto accept = [&](double r, double f) {
        roots.push_back({r, tau_sign, point_at(r), f});
    };

    double r_prev = 0.0;
    double f_prev = f2_at(0.0);
    bool prev_root = false;
    if (std::abs(f_prev) <= tol_abs) {
        accept(0.0, f_prev);
        prev_root = true;
    }
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double s = static_cast<double>(k) / static_cast<double>(k_max);
        // quadratic spacing resolves roots close to the link axis
        const double r = curve.r_max * s * s;
        const double f = f2_at(r);
        if (std::isnan(f)) break;
        if (std::abs(f) <= tol_abs) {
            if (!prev_root) accept(r, f);
            prev_root = true;
        } else {
            if (!prev_root && ((f_prev < 0.0) != (f < 0.0))) {
                double lo = r_prev, hi = r, flo = f_prev;
                double rm = 0.5 * (lo + hi), fm = f2_at(rm);
                // refine past the acceptance threshold so re-evaluation stays inside it
                constexpr double kRefine = 1e-3;
                for (int it = 0; it < opt.bisection_iterations && std::abs(fm) > kRefine * tol_abs;
                     ++it) {
                    if ((fm < 0.0) == (flo < 0.0)) {
                        lo = rm;
                        flo = fm;
                    } else {
                        hi = rm;
                    }
                    rm = 0.5 * (lo + hi);
                    fm = f2_at(rm);
                }
                // a sign change with no small residual is a jump of the distortion
                if (std::abs(fm) <= tol_abs) accept(rm, fm);
            }
            prev_root = false;
        }
        r_prev = r;
        f_prev = f;
    }
    return roots;
}

CrossSection cross_section_solve(const WorldFunction& wf, const Point& p0, const Point& p1,
                                 double radius_sq, const CrossSectionOptions& opt) {
    if (p0 == p1) throw ValidationError("cross-section needs P0 != P1");
    if (!(radius_sq > 0.0)) throw ValidationError("radius_sq must be > 0");
    if (opt.n_directions < 1) throw ValidationError("n_directions must be >= 1");
    if (!(opt.tol > 0.0)) throw ValidationError("tolerance must be > 0");
    const LinkFrame frame(wf, p0, p1);  // rejects spacelike links

    CrossSection cs;
    cs.center = p0;
    cs.direction_link = SigmaVector{p0, p1};
    cs.radius_sq = radius_sq;
    cs.f2_scale = std::abs(2.0 * wf(p0, p1) * radius_sq);

    const auto dirs = sphere_directions(frame.n_spatial(), opt.n_directions, opt.sampling, opt.seed);
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        bool found = false;
        for (int sign : {+1, -1}) {
            for (const DirectionRoot& root :
                 solve_direction(wf, p0, p1, frame, radius_sq, dirs[i], sign, opt)) {
                const Parallelism cls =
                    classify_parallel(wf, cs.direction_link, SigmaVector{p0, root.point}, opt.tol);
                if (cls == Parallelism::Neither) continue;
                found = true;
                CrossSectionSample s{i, cls, root.point, root.f2,
                                     wf(p0, root.point) - 0.5 * radius_sq};
                (cls == Parallelism::Parallel ? cs.samples_plus : cs.samples_minus)
                    .push_back(root.point);
                cs.residuals.push_back(std::abs(root.f2));
                cs.samples.push_back(std::move(s));
            }
        }
        if (!found) cs.failed_directions.push_back(i);
    }
    if (cs.samples.empty()) throw NumericalError("cross-section is empty in every direction");
    return cs;
}

std::vector<Point> distinct_points(const std::vector<Point>& pts, double eps) {
    std::vector<Point> out;
    for (const Point& p : pts) {
        const bool dup = std::any_of(out.begin(), out.end(),
                                     [&](const Point& q) { return chart_norm(p - q) <= eps; });
        if (!dup) out.push_back(p);
    }
    return out;
}

double diameter(const std::vector<Point>& pts) {
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, chart_norm(pts[i] - pts[j]));
    return d;
}

// ---------------------------------------------------------------------------

std::vector<Point> envelope_grid_scan(const Ego& ego, const ScanBox& box, double tol) {
    const std::size_t dim = ego.wf.dim();
    if (box.lo.dim() != dim || box.hi.dim() != dim || box.resolution.size() != dim)
        throw ValidationError("scan box dimension does not match the sigma-space");
    std::vector<double> h(dim);
    double h_max = 0.0;
    std::size_t total = 1;
    for (std::size_t i = 0; i < dim; ++i) {
        if (box.resolution[i] < 2) throw ValidationError("scan resolution must be >= 2 per axis");
        if (!(box.hi[i] > box.lo[i])) throw ValidationError("scan box must have hi > lo");
        h[i] = (box.hi[i] - box.lo[i]) / static_cast<double>(box.resolution[i] - 1);
        h_max = std::max(h_max, h[i]);
        total *= box.resolution[i];
        if (total > 100'000'000) throw ValidationError("scan grid too large");
    }
    // strictly inside the half-cell band, so double zeros stay one cell thick
    constexpr double kBandMargin = 1e-6;

    std::vector<Point> out;
    std::vector<std::size_t> idx(dim, 0);
    for (std::size_t n = 0; n < total; ++n) {
        Point r = box.lo;
        for (std::size_t i = 0; i < dim; ++i) r[i] = box.lo[i] + static_cast<double>(idx[i]) * h[i];
        try {
            const double f = ego_value(ego, r);
            bool member = std::abs(f) <= tol * ego_scale(ego, r);
            if (!member) {
                double g2 = 0.0;
                for (std::size_t i = 0; i < dim; ++i) {
                    const double step = 1e-3 * h[i];
                    Point rp = r, rm = r;
                    rp[i] += step;
                    rm[i] -= step;
                    const double gi = (ego_value(ego, rp) - ego_value(ego, rm)) / (2.0 * step);
                    g2 += gi * gi;
                }
                member = std::abs(f) < 0.5 * (1.0 - kBandMargin) * std::sqrt(g2) * h_max;
            }
            if (member) out.push_back(r);
        } catch (const DomainError&) {
            // root-form objects are undefined here; not a member
        }
        for (std::size_t i = dim; i-- > 0;) {
            if (++idx[i] < box.resolution[i]) break;
            idx[i] = 0;
        }
    }
    return out;
}

const char* to_string(EgoKind k) noexcept {
    switch (k) {
        case EgoKind::Sphere: return "sphere";
        case EgoKind::Ellipsoid: return "ellipsoid";
        case EgoKind::Segment: return "segment";
        case EgoKind::Ray: return "ray";
        case EgoKind::Tube: return "tube";
    }
    return "?";
}

}  // namespace tgeo
