#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

#include "tgeo/error.hpp"
#include "tgeo/worldfunc.hpp"

using namespace tgeo;

namespace {

Point random_point(std::mt19937_64& rng, std::size_t dim, double spread = 5.0) {
    std::uniform_real_distribution<double> u(-spread, spread);
    double c[4];
    for (std::size_t i = 0; i < dim; ++i) c[i] = u(rng);
    return Point(std::span<const double>(c, dim));
}

DistortionProfile profile(double d, double s0, Ramp r) { return {d, s0, r}; }

}  // namespace

TEST_SUITE("worldfunc") {

TEST_CASE("minkowski and euclidean values") {
    const auto mk = WorldFunction::minkowski(4, 1.0);
    CHECK(mk(Point{1, 0, 0, 0}, Point{0, 0, 0, 0}) == 0.5);
    CHECK(mk(Point{0, 1, 0, 0}, Point{0, 0, 0, 0}) == -0.5);
    const auto eu = WorldFunction::euclidean(2);
    CHECK(eu(Point{3, 4}, Point{0, 0}) == 12.5);
    const auto mk2 = WorldFunction::minkowski(2, 2.0);
    CHECK(mk2(Point{1, 1}, Point{0, 0}) == doctest::Approx(1.5));
}

TEST_CASE("diagonal vanishes") {
    std::mt19937_64 rng(1);
    for (const auto& wf : {WorldFunction::euclidean(3), WorldFunction::minkowski(3),
                           WorldFunction::distorted(3, 1.0, profile(0.5, 1.0, Ramp::Step))}) {
        for (int i = 0; i < 100; ++i) {
            const Point p = random_point(rng, 3);
            CHECK(wf(p, p) == 0.0);
        }
    }
}

TEST_CASE("distortion step and linear regimes") {
    // pairs chosen through their Minkowski value: P=(t,0), Q=0 gives t^2/2
    const auto step = WorldFunction::distorted(2, 1.0, profile(0.5, 1.0, Ramp::Step));
    CHECK(step(Point{std::sqrt(6.0), 0}, Point{0, 0}) == doctest::Approx(3.5));
    CHECK(step(Point{0, 2}, Point{0, 0}) == -2.0);
    const auto lin = WorldFunction::distorted(2, 1.0, profile(0.5, 1.0, Ramp::Linear));
    CHECK(lin(Point{1, 0}, Point{0, 0}) == doctest::Approx(0.75));
    CHECK(lin(Point{0, 0}, Point{0, 0}) == 0.0);
}

TEST_CASE("ramp shapes") {
    const DistortionProfile s{0.2, 1.0, Ramp::SmoothStep};
    CHECK(s(0.0) == 0.0);
    CHECK(s(-1.0) == 0.0);
    CHECK(s(0.5) == doctest::Approx(0.1));
    CHECK(s(1.0) == doctest::Approx(0.2));
    CHECK(s(2.0) == 0.2);
    const DistortionProfile st{0.2, 1.0, Ramp::Step};
    CHECK(st(1e-12) == 0.2);
}

TEST_CASE("profile is monotone and bounded") {
    for (Ramp r : {Ramp::Step, Ramp::Linear, Ramp::SmoothStep}) {
        const DistortionProfile p{0.3, 0.7, r};
        double prev = p(-2.0);
        for (int i = -2000; i <= 2000; ++i) {
            const double sm = i * 1e-3;
            const double v = p(sm);
            CHECK(v >= prev);
            CHECK(v >= 0.0);
            CHECK(v <= p.d);
            prev = v;
        }
    }
}

TEST_CASE("profile inversion") {
    for (Ramp r : {Ramp::Linear, Ramp::SmoothStep}) {
        const DistortionProfile p{0.3, 0.7, r};
        for (double sm : {-1.0, 0.0, 0.1, 0.35, 0.7, 3.0}) {
            double back = 0.0;
            REQUIRE(p.invert(sm + p(sm), back));
            CHECK(back == doctest::Approx(sm).epsilon(1e-12));
        }
    }
    const DistortionProfile st{0.3, 0.7, Ramp::Step};
    double out = 0.0;
    CHECK_FALSE(st.invert(0.1, out));  // inside the jump (0, d]
    CHECK(st.invert(1.0, out));
    CHECK(out == doctest::Approx(0.7));
}

TEST_CASE("zero distortion matches minkowski bit for bit") {
    std::mt19937_64 rng(7);
    const auto mk = WorldFunction::minkowski(4, 1.3);
    const auto dz = WorldFunction::distorted(4, 1.3, profile(0.0, 1.0, Ramp::Linear));
    for (int i = 0; i < 10000; ++i) {
        const Point p = random_point(rng, 4), q = random_point(rng, 4);
        const double a = mk(p, q), b = dz(p, q);
        CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    }
}

TEST_CASE("distortion bounded by d") {
    std::mt19937_64 rng(11);
    const auto mk = WorldFunction::minkowski(3);
    for (Ramp r : {Ramp::Step, Ramp::Linear, Ramp::SmoothStep}) {
        const auto wf = WorldFunction::distorted(3, 1.0, profile(0.25, 0.5, r));
        for (int i = 0; i < 5000; ++i) {
            const Point p = random_point(rng, 3, 1.0), q = random_point(rng, 3, 1.0);
            const double sm = mk(p, q);
            // the sum sm + D rounds once
            CHECK(std::abs(wf(p, q) - sm) <= 0.25 + 4e-16 * std::max(1.0, std::abs(sm)));
        }
    }
}

TEST_CASE("errors") {
    const auto mk = WorldFunction::minkowski(4);
    CHECK_THROWS_AS(mk(Point{0, 0}, Point{0, 0}), ValidationError);
    CHECK_THROWS_AS(Point({0.0, std::nan("")}), ValidationError);
    CHECK_THROWS_AS(Point({0.0, INFINITY, 1.0}), ValidationError);
    CHECK_THROWS_AS(Point({1.0}), ValidationError);
    CHECK_THROWS_AS(WorldFunction::distorted(2, 1.0, profile(-1.0, 1.0, Ramp::Step)),
                    ValidationError);
    CHECK_THROWS_AS(WorldFunction::minkowski(5), ValidationError);
}

TEST_CASE("distortion scale") {
    PhysicalConstants cgs{3e10, 1.0546e-27, 1e-17, 9.109e-28};
    CHECK(derive_distortion_scale(cgs) == doctest::Approx(1.7577e-21).epsilon(1e-4));
    CHECK(derive_distortion_scale(PhysicalConstants{1.0, 2.0, 1.0, 1.0}) == 1.0);
    CHECK_THROWS_AS(derive_distortion_scale(PhysicalConstants{1.0, 1.0, 0.0, 1.0}),
                    ValidationError);
}

}  // TEST_SUITE
