#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "impref/area_quadrature.hpp"
#include "impref/quadrature.hpp"

using namespace impref;

TEST_CASE("Gauss-Legendre rules integrate polynomials of degree 2n - 1") {
    for (int n : {1, 4, 12, 32}) {
        const auto r = quad::fixed([n](double t) { return std::pow(t, 2 * n - 1) + std::pow(t, 2 * n - 2); }, 0.0, 1.0, n);
        CHECK(std::abs(r - (1.0 / (2 * n) + 1.0 / (2 * n - 1))) <= 1e-14);
    }
}

TEST_CASE("doubling, adaptive and graded rules") {
    const auto d = quad::doubling([](double t) { return std::exp(t) * std::cos(5 * t); }, 0.0, 2.0, 8, 1e-13);
    const double exact = (std::exp(2.0) * (std::cos(10.0) + 5 * std::sin(10.0)) - 1.0) / 26.0;
    CHECK(d.converged);
    CHECK(std::abs(d.value - exact) <= 1e-12);
    const auto a = quad::adaptive([](double t) { return std::sqrt(t); }, 0.0, 1.0, 1e-10);
    CHECK(std::abs(a.value - 2.0 / 3.0) <= 1e-9);
    const double delta = 1e-4;
    const double g = quad::graded([&](double t) { return delta / (delta * delta + (t - 0.3) * (t - 0.3)); }, 0.0, 1.0, 0.3, delta, 16);
    CHECK(std::abs(g - (std::atan(0.7 / delta) + std::atan(0.3 / delta))) <= 1e-10);
}

TEST_CASE("area rule: polynomial exactness and a logarithmic point singularity") {
    const Polygon p({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    const auto nodes = area_rule(p, {Segment({0.5, 0}, {0.5, 1.5})}, {0.5, 1.5});
    double area = 0.0, mx = 0.0, quad2 = 0.0;
    for (const AreaNode& n : nodes) {
        area += n.weight;
        mx += n.weight * n.y.x;
        quad2 += n.weight * n.y.x * n.y.y;
    }
    CHECK(std::abs(area - 3.0) <= 1e-13);
    CHECK(std::abs(mx - 2.5) <= 1e-13);  // lower 2x1 rectangle gives 2, upper unit square gives 0.5
    CHECK(std::abs(quad2 - (1.0 + 0.75)) <= 1e-13);

    // int over the unit square of log|y| with the singular corner at the origin
    const Polygon sq({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    double s = 0.0;
    const double exact = 0.5 * (std::log(2.0) - 3.0) + pi / 4.0;
    auto log_integral = [&](int levels) {
        AreaQuadSpec spec;
        spec.focus_grading = levels;
        spec.order = 16;
        double s = 0.0;
        for (const AreaNode& n : area_rule(sq, {}, {0, 0}, spec)) s += n.weight * std::log(norm(n.y));
        return std::abs(s - exact);
    };
    CHECK(log_integral(0) <= 1e-4);
    CHECK(log_integral(12) <= 1e-12);
}

TEST_CASE("split_convex") {
    const std::vector<Vec2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto pieces = split_convex(sq, Line({0.25, 0}, {0, 1}), 1e-12);
    REQUIRE(pieces.size() == 2);
    double a = 0.0;
    for (const auto& piece : pieces) a += std::abs(signed_area(piece));
    CHECK(std::abs(a - 1.0) <= 1e-14);
    CHECK(split_convex(sq, Line({2, 0}, {0, 1}), 1e-12).size() == 1);
}
