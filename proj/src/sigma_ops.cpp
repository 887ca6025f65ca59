#include "tgeo/sigma_ops.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "tgeo/error.hpp"

namespace tgeo {

namespace {

Eigen::MatrixXd gram_matrix(const WorldFunction& wf, std::span<const Point> sk) {
    if (sk.size() < 2) throw ValidationError("gram determinant needs at least 2 points");
    const auto n = static_cast<Eigen::Index>(sk.size() - 1);
    const Point& p0 = sk[0];
    Eigen::VectorXd s0(n);
    for (Eigen::Index i = 0; i < n; ++i) s0(i) = wf(p0, sk[i + 1]);
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        g(i, i) = 2.0 * s0(i);
        for (Eigen::Index k = i + 1; k < n; ++k) {
            const double v = s0(i) + s0(k) - wf(sk[i + 1], sk[k + 1]);
            g(i, k) = v;
            g(k, i) = v;
        }
    }
    return g;
}

}  // namespace

double squared_length(const WorldFunction& wf, const SigmaVector& v) {
    return 2.0 * wf(v.origin, v.end);
}

double scalar_product_two_origin(const WorldFunction& wf, const SigmaVector& v1,
                                 const SigmaVector& v2) {
    const Point& p0 = v1.origin;
    const Point& p1 = v1.end;
    const Point& q0 = v2.origin;
    const Point& q1 = v2.end;
    return wf(p0, q1) + wf(q0, p1) - wf(p0, q0) - wf(p1, q1);
}

double scalar_product(const WorldFunction& wf, const SigmaVector& v1, const SigmaVector& v2) {
    if (v1.origin == v2.origin) {
        const Point& p0 = v1.origin;
        // summation order fixed so the product is exactly symmetric
        const double a = wf(p0, v1.end);
        const double b = wf(p0, v2.end);
        return (a + b) - wf(v1.end, v2.end);
    }
    return scalar_product_two_origin(wf, v1, v2);
}

double gram_det(const WorldFunction& wf, std::span<const Point> skeleton) {
    const Eigen::MatrixXd g = gram_matrix(wf, skeleton);
    if (g.rows() == 1) return g(0, 0);
    return g.partialPivLu().determinant();
}

double gram_scale(const WorldFunction& wf, std::span<const Point> skeleton) {
    const Eigen::MatrixXd g = gram_matrix(wf, skeleton);
    double s = 1.0;
    for (Eigen::Index i = 0; i < g.rows(); ++i) s *= std::abs(g(i, i));
    return s;
}

bool is_linearly_independent(const WorldFunction& wf, std::span<const Point> skeleton,
                             double tol) {
    if (!(tol > 0.0)) throw ValidationError("tolerance must be > 0");
    const Eigen::MatrixXd g = gram_matrix(wf, skeleton);
    double scale = 1.0;
    for (Eigen::Index i = 0; i < g.rows(); ++i) scale *= std::abs(g(i, i));
    const double det = g.rows() == 1 ? g(0, 0) : g.partialPivLu().determinant();
    return std::abs(det) > tol * scale;
}

double cos2_angle(const WorldFunction& wf, const SigmaVector& v1, const SigmaVector& v2) {
    const double l1 = squared_length(wf, v1);
    const double l2 = squared_length(wf, v2);
    if (l1 == 0.0 || l2 == 0.0) throw ValidationError("zero-length vector has no angle");
    const double p = scalar_product(wf, v1, v2);
    return (p * p) / (l1 * l2);
}

Parallelism classify_parallel(const WorldFunction& wf, const SigmaVector& v1,
                              const SigmaVector& v2, double tol) {
    const double c2 = cos2_angle(wf, v1, v2);
    if (std::abs(c2 - 1.0) > tol) return Parallelism::Neither;
    const double p = scalar_product(wf, v1, v2);
    if (p > 0.0) return Parallelism::Parallel;
    if (p < 0.0) return Parallelism::Antiparallel;
    return Parallelism::Neither;
}

const char* to_string(Parallelism p) noexcept {
    switch (p) {
        case Parallelism::Parallel: return "parallel";
        case Parallelism::Antiparallel: return "antiparallel";
        case Parallelism::Neither: return "neither";
    }
    return "?";
}

}  // namespace tgeo
