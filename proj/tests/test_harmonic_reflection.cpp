#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "impref/harmonic_reflection.hpp"
#include "oracles.hpp"

using namespace impref;

namespace {

PathCurve vertical(Vec2 x) { return PathCurve({{x.x, 0.0}, x}); }

PathCurve detour(Vec2 x) {
    return PathCurve({{x.x - 0.6, 0.0}, {x.x - 0.6, x.y + 0.4}, {x.x + 0.3, x.y + 0.4}, x});
}

}  // namespace

TEST_CASE("v_kernel_line examples") {
    CHECK(std::abs(v_kernel_line({0.7, 0.3}, {0.7, -0.2}, 1.3)) == 0.0);
    CHECK(std::abs(v_kernel_line({1, 0}, {0, 0}, 1.0) + 4.0 * std::sinh(1.0)) <= 1e-14);
    CHECK(std::abs(v_kernel_line({1, 0.5}, {0.2, -1}, 0.0)) == 0.0);
}

TEST_CASE("v_kernel_line_eval gradient matches central differences") {
    const Vec2 xt{0.2, -0.6};
    const double h = 1e-6;
    for (cplx lam : {cplx(0.5), cplx(2.0), cplx(1.0, 0.3)}) {
        const Vec2 y{0.9, 0.4};
        const KernelEval k = v_kernel_line_eval(y, xt, lam);
        CHECK(std::abs(k.value - v_kernel_line(y, xt, lam)) <= 1e-14);
        const cplx dx = (v_kernel_line(y + Vec2{h, 0}, xt, lam) - v_kernel_line(y - Vec2{h, 0}, xt, lam)) / (2 * h);
        const cplx dy = (v_kernel_line(y + Vec2{0, h}, xt, lam) - v_kernel_line(y - Vec2{0, h}, xt, lam)) / (2 * h);
        CHECK(std::abs(k.grad.x - dx) <= 1e-8);
        CHECK(std::abs(k.grad.y - dy) <= 1e-8);
    }
}

TEST_CASE("v_kernel_general reduces to the closed form for constant impedance") {
    std::mt19937_64 g(21);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (double lam : {0.5, 1.0, 2.0}) {
        const RobinLineBC bc = RobinLineBC::holomorphic([lam](cplx) { return cplx(lam); });
        for (int i = 0; i < 30; ++i) {
            const Vec2 y{u(g), u(g)}, xt{u(g), u(g)};
            const KernelEval a = v_kernel_general(y, xt, bc), b = v_kernel_line_eval(y, xt, lam);
            CHECK(std::abs(a.value - b.value) <= 1e-10);
            CHECK(std::abs(a.grad.x - b.grad.x) <= 1e-10);
            CHECK(std::abs(a.grad.y - b.grad.y) <= 1e-10);
        }
    }
}

TEST_CASE("v_kernel_general: zero impedance and self-convergence") {
    const RobinLineBC zero = RobinLineBC::holomorphic([](cplx) { return cplx(0.0); });
    CHECK(std::abs(v_kernel_general({0.3, 0.2}, {0, 0.5}, zero).value) == 0.0);
    const RobinLineBC lin = RobinLineBC::holomorphic([](cplx s) { return 1.0 + s; });
    const cplx coarse = v_kernel_general({0.3, 0.2}, {0, 0.5}, lin, 1e-9).value;
    const cplx fine = v_kernel_general({0.3, 0.2}, {0, 0.5}, lin, 1e-14).value;
    CHECK(std::abs(coarse - fine) <= 1e-9);
    // linear impedance integrates exactly: int beta = i (s + s^2/2)
    auto B = [](cplx s) { return I * (s + 0.5 * s * s); };
    const cplx z{0.3, 0.2}, w{0.3, -0.2}, z0{0, 0.5}, w0{0, -0.5};
    const cplx expect = (1.0 - 2.0 * std::exp(-I * (B(w) - B(z0)))) - (1.0 - 2.0 * std::exp(I * (B(z) - B(w0))));
    CHECK(std::abs(fine - expect) <= 1e-12);
}

TEST_CASE("dtilde_apply reproduces the exact family on a grid") {
    for (double lam : {0.5, 1.0, 2.0}) {
        const RobinLineBC bc = RobinLineBC::constant(lam);
        const FieldOracle w = oracle::robin_harmonic(lam);
        double worst = 0.0;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                const Vec2 x{-1.0 + 0.4 * i, 0.1 + 0.35 * j};
                const cplx expect = oracle::robin_harmonic_value(lam, {x.x, -x.y});
                worst = std::max(worst, std::abs(dtilde_apply(w, detour(x), bc, x) - expect));
            }
        CHECK(worst <= 1e-8);
    }
    const cplx v = dtilde_apply(oracle::robin_harmonic(1.0), vertical({0, 1}), RobinLineBC::constant(1.0), {0, 1});
    CHECK(std::abs(v - cplx(0.54030230586, 0.84147098481)) <= 1e-10);
}

TEST_CASE("dtilde_apply is independent of the path") {
    std::mt19937_64 g(4);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 20; ++i) {
        const double lam = 0.5 + 1.5 * (u(g) + 1) / 2;
        const FieldOracle w = oracle::robin_harmonic(lam, cplx(u(g), u(g)), cplx(u(g), u(g)));
        const RobinLineBC bc = RobinLineBC::constant(lam);
        const Vec2 x{u(g), 0.3 + (u(g) + 1)};
        CHECK(std::abs(dtilde_apply(w, vertical(x), bc, x) - dtilde_apply(w, detour(x), bc, x)) <= 1e-8);
    }
}

TEST_CASE("Neumann degeneracy and the vertical form") {
    const FieldOracle w = FieldOracle::with_gradient([](Vec2 p) {
        return FieldSample{cplx(p.x * p.x - p.y * p.y, p.x), {cplx(2 * p.x, 1), cplx(-2 * p.y, 0)}};
    });
    const Vec2 x{0.4, 0.7};
    CHECK(dtilde_apply(w, detour(x), RobinLineBC::constant(0.0), x) == w.value(x));
    const FieldOracle w2 = oracle::robin_harmonic(2.0);
    const RobinLineBC bc2 = RobinLineBC::constant(2.0);
    CHECK(std::abs(dtilde_apply_vertical(w2, bc2, {0.3, 0.7}) - std::exp(cplx(-0.6, 1.4))) <= 1e-10);
    CHECK(std::abs(dtilde_apply_vertical(w2, bc2, {0.3, 0.7}) - dtilde_apply(w2, vertical({0.3, 0.7}), bc2, {0.3, 0.7})) <= 1e-10);
    CHECK(dtilde_apply_vertical(w2, bc2, {0.3, 0.0}) == w2.value({0.3, 0.0}));
    CHECK(std::abs(dtilde_apply_vertical(w2, bc2, {0.3, 1e-9}) - w2.value({0.3, 0.0})) <= 1e-7);
}

TEST_CASE("extension is harmonic below the line and its Cauchy data are continuous") {
    const double lam = 1.0;
    const FieldOracle w = oracle::robin_harmonic(lam, 1.0, cplx(0.3, -0.2));
    const RobinLineBC bc = RobinLineBC::constant(lam);
    // x -> D~w(x) represents the extension at (x1, -x2)
    auto ext = [&](Vec2 below) {
        const Vec2 x{below.x, -below.y};
        return dtilde_apply(w, vertical(x), bc, x);
    };
    const double h = 1e-3;
    for (Vec2 p : {Vec2{0.2, -0.5}, Vec2{-0.7, -1.1}, Vec2{0.9, -0.3}}) {
        const cplx lap = (ext(p + Vec2{h, 0}) + ext(p - Vec2{h, 0}) + ext(p + Vec2{0, h}) + ext(p - Vec2{0, h}) - 4.0 * ext(p)) / (h * h);
        CHECK(std::abs(lap) <= 1e-5);
    }
    // one-sided limits across the line
    const double x1 = 0.35, e = 1e-4;
    const cplx below = ext({x1, -e}), above = w.value({x1, e});
    CHECK(std::abs(below - above) <= 1e-6 + 2 * e * std::abs(w(Vec2{x1, 0}).grad.y));
    const cplx d_below = (ext({x1, -e}) - ext({x1, -2 * e})) / e;
    const cplx d_above = (w.value({x1, 2 * e}) - w.value({x1, e})) / e;
    CHECK(std::abs(d_below - d_above) <= 1e-3);
}

TEST_CASE("involution: applying the operator to the extension returns the original") {
    const double lam = 0.8;
    const cplx a{0.7, 0.1}, b{-0.2, 0.4};
    const FieldOracle w = oracle::robin_harmonic(lam, a, b);
    // the extension of this entire family is the family itself, mirrored
    const FieldOracle wt = FieldOracle::with_gradient([&](Vec2 p) {
        const FieldSample s = w(Vec2{p.x, -p.y});
        return FieldSample{s.value, {s.grad.x, -s.grad.y}};
    });
    // wt satisfies the Robin condition from below with the opposite normal
    const RobinLineBC below = RobinLineBC::constant(lam, Line({0, 0}, {-1, 0}));
    for (Vec2 x : {Vec2{0.3, -0.4}, Vec2{-0.5, -1.2}}) {
        const cplx back = dtilde_apply(wt, PathCurve({{x.x, 0}, x}), below, x);
        CHECK(std::abs(back - w.value(x)) <= 1e-7);
    }
}

TEST_CASE("extend_general: constant and variable impedance") {
    const double lam = 1.2;
    const FieldOracle w = oracle::robin_harmonic(lam);
    const RobinLineBC c = RobinLineBC::constant(lam);
    const RobinLineBC h = RobinLineBC::holomorphic([lam](cplx) { return cplx(lam); });
    const Vec2 x{0.3, -0.8}, rx{0.3, 0.8};
    const cplx ref = dtilde_apply(w, detour(rx), c, rx);
    CHECK(std::abs(extend_general(w, detour(rx), h, x) - ref) <= 1e-7);
    CHECK(std::abs(extend_general(w, detour(rx), c, x) - ref) <= 1e-12);
    const RobinLineBC zero = RobinLineBC::holomorphic([](cplx) { return cplx(0.0); });
    const FieldOracle n = oracle::robin_harmonic(0.0, 1.0);
    CHECK(std::abs(extend_general(n, vertical(rx), zero, x) - n.value(rx)) <= 1e-14);

    // lambda(s) = 1 + s^2/100: e^{-Lambda(z)} with Lambda' = lambda solves the Robin condition
    auto Lam = [](cplx s) { return s + s * s * s / 300.0; };
    auto lamf = [](cplx s) { return 1.0 + s * s / 100.0; };
    const RobinLineBC var = RobinLineBC::holomorphic(lamf);
    const FieldOracle wv = FieldOracle::with_gradient([&](Vec2 p) {
        const cplx z{p.x, p.y};
        const cplx v = std::exp(-Lam(z));
        return FieldSample{v, {-lamf(z) * v, -I * lamf(z) * v}};
    });
    for (Vec2 q : {Vec2{0.2, -0.5}, Vec2{-0.4, -1.0}}) {
        const Vec2 rq{q.x, -q.y};
        const cplx expect = std::exp(-Lam(cplx(q.x, q.y)));
        const cplx got = extend_general(wv, detour(rq), var, q);
        CHECK(std::abs(got - expect) <= 1e-6);
        DtildeOptions fine;
        fine.tol = 1e-13;
        CHECK(std::abs(extend_general(wv, vertical(rq), var, q, fine) - got) <= 1e-6);
    }
}

TEST_CASE("input validation and the overflow guard") {
    const FieldOracle w = oracle::robin_harmonic(1.0);
    const RobinLineBC bc = RobinLineBC::constant(1.0);
    CHECK_THROWS_AS(dtilde_apply(w, PathCurve({{0, 0.2}, {0, 1}}), bc, {0, 1}), InputError);
    CHECK_THROWS_AS(dtilde_apply(w, PathCurve({{0, 0}, {0, 0.9}}), bc, {0, 1}), InputError);
    CHECK_THROWS_AS(dtilde_apply(w, PathCurve({{0, 0}, {0.5, -0.2}, {0, 1}}), bc, {0, 1}), InputError);
    CHECK_THROWS_AS(dtilde_apply(w, vertical({0, -1}), bc, {0, -1}), InputError);
    const RobinLineBC big = RobinLineBC::constant(100.0);
    CHECK_THROWS_AS(dtilde_apply(w, PathCurve({{-4, 0}, {0, 1}}), big, {0, 1}), RangeError);
    CHECK_THROWS_AS(dtilde_apply(w, vertical({0, 1}), RobinLineBC::holomorphic([](cplx) { return cplx(1); }), {0, 1}),
                    InputError);
}

TEST_CASE("finite-difference gradient fallback") {
    const double lam = 0.7;
    const FieldOracle exact = oracle::robin_harmonic(lam);
    const FieldOracle values = FieldOracle::value_only([&](Vec2 p) { return oracle::robin_harmonic_value(lam, p); });
    const Vec2 x{0.1, 0.9};
    const cplx a = dtilde_apply(exact, detour(x), RobinLineBC::constant(lam), x);
    const cplx b = dtilde_apply(values, detour(x), RobinLineBC::constant(lam), x);
    CHECK(std::abs(a - b) <= 1e-7);
}

TEST_CASE("the negated-phase hook breaks exactness") {
    DtildeOptions bad;
    bad.negate_kernel_phase = true;
    const FieldOracle w = oracle::robin_harmonic(1.0);
    const Vec2 x{0.2, 0.8};
    const cplx expect = oracle::robin_harmonic_value(1.0, {x.x, -x.y});
    CHECK(std::abs(dtilde_apply(w, detour(x), RobinLineBC::constant(1.0), x, bad) - expect) > 1e-3);
}
