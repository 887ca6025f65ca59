#pragma once

#include <span>

#include "tgeo/worldfunc.hpp"

namespace tgeo {

/// Ordered pair of points. Its squared length 2*sigma may be negative.
struct SigmaVector {
    Point origin;
    Point end;
};

inline constexpr double kDefaultTol = 1e-9;

/// 2 sigma(origin, end).
double squared_length(const WorldFunction& wf, const SigmaVector& v);

/// Cosine-theorem product. Uses the common-origin form when the origins
/// coincide and the four-point form otherwise.
double scalar_product(const WorldFunction& wf, const SigmaVector& v1, const SigmaVector& v2);

/// Four-point product, always; equals scalar_product when origins coincide.
double scalar_product_two_origin(const WorldFunction& wf, const SigmaVector& v1,
                                 const SigmaVector& v2);

/// Determinant of the Gram matrix (P0Pi . P0Pk), i,k = 1..n.
double gram_det(const WorldFunction& wf, std::span<const Point> skeleton);

/// Product of |diagonal| of the Gram matrix; the natural scale of gram_det.
double gram_scale(const WorldFunction& wf, std::span<const Point> skeleton);

bool is_linearly_independent(const WorldFunction& wf, std::span<const Point> skeleton,
                             double tol = kDefaultTol);

double cos2_angle(const WorldFunction& wf, const SigmaVector& v1, const SigmaVector& v2);

enum class Parallelism { Parallel, Antiparallel, Neither };

Parallelism classify_parallel(const WorldFunction& wf, const SigmaVector& v1,
                              const SigmaVector& v2, double tol = kDefaultTol);

const char* to_string(Parallelism p) noexcept;

}  // namespace tgeo
