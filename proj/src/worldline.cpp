#include "tgeo/worldline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

namespace tgeo {

namespace {

std::mt19937_64 line_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

// Rows 1..dim-1 of the Householder reflection sending e to a multiple of
// the first axis: an orthonormal basis of the complement of e.
std::vector<std::array<double, 4>> complement_basis(const Point& link) {
    const std::size_t dim = link.dim();
    const double norm = chart_norm(link);
    std::array<double, 4> v{};
    for (std::size_t i = 0; i < dim; ++i) v[i] = link[i] / norm;
    v[0] += (v[0] >= 0.0) ? 1.0 : -1.0;
    double vv = 0.0;
    for (std::size_t i = 0; i < dim; ++i) vv += v[i] * v[i];
    std::vector<std::array<double, 4>> rows(dim - 1);
    for (std::size_t i = 1; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            rows[i - 1][j] = (i == j ? 1.0 : 0.0) - 2.0 * v[i] * v[j] / vv;
    return rows;
}

// Pairwise sum of f(i) over [lo, hi); fixed association for a given range.
template <class F>
std::vector<double> pairwise_sum(std::size_t lo, std::size_t hi, const F& f) {
    if (hi - lo == 1) return f(lo);
    const std::size_t mid = lo + (hi - lo) / 2;
    std::vector<double> a = pairwise_sum(lo, mid, f);
    const std::vector<double> b = pairwise_sum(mid, hi, f);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

}  // namespace

std::vector<Point> next_point_set(const WorldFunction& wf, const Point& p_prev,
                                  const Point& p_cur, std::size_t n_candidates, double tol) {
    CrossSectionOptions opt;
    opt.n_directions = n_candidates;
    opt.tol = tol;
    // the common-origin vector P_cur->P_prev is antiparallel to P_prev->P_cur
    const CrossSection cs = cross_section_solve(wf, p_cur, p_prev, 2.0 * wf(p_prev, p_cur), opt);
    std::vector<Point> out;
    for (const Point& p : cs.samples_minus)
        if (p.t() > p_cur.t()) out.push_back(p);
    if (out.empty()) throw NumericalError("no forward parallel continuation");
    return out;
}

Point initial_link(const WorldFunction& wf, const Point& p0, double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw ValidationError("mu must be positive");
    if (!wf.has_lorentz_signature()) throw ValidationError("world lines need a Lorentz signature");
    double base = 0.0;
    if (!wf.invert(0.5 * mu * mu, base) || !(base > 0.0))
        throw ValidationError("mu^2/2 is not attained by the world function");
    Point p1 = p0;
    p1[0] += std::sqrt(2.0 * base) / wf.c();
    return p1;
}

WorldLine generate_worldline(const WorldFunction& wf, const Point& p0, const Point& p1,
                             std::size_t n_steps, std::uint64_t seed,
                             const WorldlineOptions& opt, std::uint64_t stream) {
    if (n_steps < 1) throw ValidationError("n_steps must be >= 1");
    if (opt.max_attempts < 1) throw ValidationError("max_attempts must be >= 1");
    const double radius_sq = 2.0 * wf(p0, p1);
    if (!(radius_sq > 0.0) || !(p1.t() > p0.t()))
        throw ValidationError("first link must be timelike and future-pointing");

    WorldLine line;
    line.mu = std::sqrt(radius_sq);
    line.seed = seed;
    line.points.reserve(n_steps + 2);
    line.points.push_back(p0);
    line.points.push_back(p1);

    std::mt19937_64 rng = line_engine(seed, stream);
    const double tol = opt.cross_section.tol;
    for (std::size_t step = 1; step <= n_steps; ++step) {
        const Point prev = line.points[line.points.size() - 2];
        const Point cur = line.points.back();
        const LinkFrame frame(wf, cur, prev);
        const int forward = -frame.link_sign();
        const SigmaVector back{cur, prev};
        bool placed = false;
        for (std::size_t attempt = 0; attempt < opt.max_attempts && !placed; ++attempt) {
            const double u1 = uniform_from_bits(rng());
            const double u2 = uniform_from_bits(rng());
            const Direction u = unit_direction(frame.n_spatial(), u1, u2);
            for (const DirectionRoot& root :
                 solve_direction(wf, cur, prev, frame, radius_sq, u, forward, opt.cross_section)) {
                if (!(root.point.t() > cur.t())) continue;
                if (classify_parallel(wf, back, SigmaVector{cur, root.point}, tol) !=
                    Parallelism::Antiparallel)
                    continue;
                line.points.push_back(root.point);
                placed = true;
                break;
            }
        }
        if (!placed)
            throw WorldlineError("no parallel continuation at step " + std::to_string(step),
                                 line, step);
    }
    return line;
}

std::vector<WorldLine> generate_ensemble(const WorldFunction& wf, const Point& p0,
                                         const Point& p1, std::size_t n_lines,
                                         std::size_t n_steps, std::uint64_t seed,
                                         std::size_t workers, const WorldlineOptions& opt) {
    if (n_lines < 1) throw ValidationError("n_lines must be >= 1");
    workers = std::clamp<std::size_t>(workers, 1, n_lines);
    std::vector<WorldLine> lines(n_lines);
    std::vector<std::exception_ptr> errors(n_lines);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n_lines; i = next++) {
            try {
                lines[i] = generate_worldline(wf, p0, p1, n_steps, seed, opt, i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return lines;
}

ChainCheck verify_worldline(const WorldFunction& wf, const WorldLine& line, double tol) {
    ChainCheck out;
    const auto& pts = line.points;
    const double mu2 = line.mu * line.mu;
    auto fail = [&](std::size_t i, std::string why) {
        if (out.ok) {
            out.ok = false;
            out.first_bad_link = i;
            out.reason = std::move(why);
        }
    };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double res = std::abs(2.0 * wf(pts[i], pts[i + 1]) - mu2) / mu2;
        out.max_length_residual = std::max(out.max_length_residual, res);
        if (res > tol) fail(i, "link length");
        if (!(pts[i + 1].t() > pts[i].t())) fail(i, "time order");
        if (i + 2 < pts.size() &&
            classify_parallel(wf, SigmaVector{pts[i], pts[i + 1]},
                              SigmaVector{pts[i + 1], pts[i + 2]}, tol) != Parallelism::Parallel)
            fail(i, "adjacent links not parallel");
    }
    return out;
}

EnsembleStats ensemble_stats(const std::vector<WorldLine>& lines) {
    if (lines.size() < 2) throw ValidationError("ensemble_stats needs at least 2 lines");
    const std::size_t n_pts = lines[0].points.size();
    if (n_pts < 2) throw ValidationError("lines must have at least one link");
    const std::size_t dim = lines[0].points[0].dim();
    for (const auto& l : lines) {
        if (l.points.size() != n_pts || l.mu != lines[0].mu || l.points[0].dim() != dim)
            throw ValidationError("lines differ in length, mu or dimension");
    }
    const std::size_t n_steps = n_pts - 2;
    const std::size_t m = dim - 1;
    const double n = static_cast<double>(lines.size());

    auto lateral = [&](const WorldLine& l, std::size_t k) {
        const auto rows = complement_basis(l.points[1] - l.points[0]);
        const Point d = l.points[k] - l.points[0];
        std::vector<double> out(m, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < dim; ++j) out[i] += rows[i][j] * d[j];
        return out;
    };

    EnsembleStats st;
    st.n_lines = lines.size();
    st.n_steps = n_steps;

    // msd over the points after the first link: k = 0 is P1
    st.msd_per_step.resize(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const auto s = pairwise_sum(0, lines.size(), [&](std::size_t i) {
            const auto x = lateral(lines[i], k + 1);
            double r2 = 0.0;
            for (double v : x) r2 += v * v;
            return std::vector<double>{r2};
        });
        st.msd_per_step[k] = s[0] / n;
    }

    const std::size_t last = n_pts - 1;
    const auto sum = pairwise_sum(0, lines.size(),
                                  [&](std::size_t i) { return lateral(lines[i], last); });
    st.mean_lateral.resize(m);
    for (std::size_t i = 0; i < m; ++i) st.mean_lateral[i] = sum[i] / n;
    const auto sq = pairwise_sum(0, lines.size(), [&](std::size_t i) {
        const auto x = lateral(lines[i], last);
        std::vector<double> out(m * m);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                out[a * m + b] = (x[a] - st.mean_lateral[a]) * (x[b] - st.mean_lateral[b]);
        return out;
    });
    st.cov_lateral.assign(m, std::vector<double>(m));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            st.cov_lateral[a][b] = 0.5 * (sq[a * m + b] + sq[b * m + a]) / (n - 1.0);

    // least squares msd = slope * k + intercept
    const double kn = static_cast<double>(n_steps + 1);
    double kbar = 0.0, ybar = 0.0;
    for (std::size_t k = 0; k <= n_steps; ++k) {
        kbar += static_cast<double>(k);
        ybar += st.msd_per_step[k];
    }
    kbar /= kn;
    ybar /= kn;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double dx = static_cast<double>(k) - kbar, dy = st.msd_per_step[k] - ybar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    st.regression_slope = sxx > 0.0 ? sxy / sxx : 0.0;
    if (syy > 0.0 && sxx > 0.0) {
        double ss_res = 0.0;
        const double icpt = ybar - st.regression_slope * kbar;
        for (std::size_t k = 0; k <= n_steps; ++k) {
            const double e = st.msd_per_step[k] - (st.regression_slope * static_cast<double>(k) + icpt);
            ss_res += e * e;
        }
        st.regression_r2 = 1.0 - ss_res / syy;
    } else {
        st.regression_r2 = 1.0;
    }
    return st;
}

const char* to_string(SamplingMeasure m) noexcept {
    switch (m) {
        case SamplingMeasure::IsotropicRestFrame: return "isotropic-rest-frame";
    }
    return "?";
}

}  // namespace tgeo
