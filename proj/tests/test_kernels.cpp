#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "impref/kernels.hpp"
#include "oracles.hpp"

using namespace impref;

TEST_CASE("phi_laplace examples") {
    CHECK(std::abs(phi_laplace({0, 0}, {1, 0})) <= 1e-16);
    CHECK(std::abs(phi_laplace({0, 0}, {std::exp(1.0), 0}) + 1.0 / (2 * pi)) <= 1e-15);
    CHECK(std::abs(phi_laplace({0, 0}, {3, 4}) + std::log(5.0) / (2 * pi)) <= 1e-15);
    CHECK_THROWS_AS(phi_laplace({1, 1}, {1, 1}), InputError);
}

TEST_CASE("fundamental solutions satisfy their equations away from the source") {
    const double h = 1e-3;
    const Vec2 y{0.2, -0.1};
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 20; ++i) {
        Vec2 x{u(g), u(g)};
        if (dist(x, y) < 0.5) continue;
        auto lap = [&](auto f) { return (f(x + Vec2{h, 0}) + f(x - Vec2{h, 0}) + f(x + Vec2{0, h}) + f(x - Vec2{0, h}) - 4.0 * f(x)) / (h * h); };
        CHECK(std::abs(lap([&](Vec2 p) { return phi_laplace(p, y); })) <= 1e-6);
        const double k = 1.7;
        auto ph = [&](Vec2 p) { return phi_helmholtz(p, y, k).value; };
        CHECK(std::abs(lap(ph) + k * k * ph(x)) <= 1e-6);
    }
}

TEST_CASE("phi_helmholtz against the std Bessel oracle, log slope and decay") {
    const GreensEval g = phi_helmholtz({0, 0}, {1, 0}, 1.0);
    CHECK(std::abs(g.value - 0.25 * I * oracle::H(0, 1.0)) <= 1e-12);
    // gradient in x of (i/4) H0(k|x - y|) is -(ik/4) H1 (x - y)/r
    const GreensEval g2 = phi_helmholtz({0.3, 0.4}, {0, 0}, 2.0);
    const cplx f = -0.25 * I * 2.0 * oracle::H(1, 1.0);
    CHECK(std::abs(g2.grad.x - f * 0.6) <= 1e-12);
    CHECK(std::abs(g2.grad.y - f * 0.8) <= 1e-12);
    // small argument: same log slope as phi_laplace
    const double r1 = 1e-6, r2 = 2e-6;
    const cplx slope = phi_helmholtz({0, 0}, {r2, 0}, 1.0).value - phi_helmholtz({0, 0}, {r1, 0}, 1.0).value;
    CHECK(std::abs(slope - (phi_laplace({0, 0}, {r2, 0}) - phi_laplace({0, 0}, {r1, 0}))) <= 1e-9);
    for (double kr : {50.0, 120.0, 400.0}) {
        const double expect = 0.25 * std::sqrt(2.0 / (pi * kr));
        CHECK(std::abs(std::abs(phi_helmholtz({0, 0}, {kr, 0}, 1.0).value) / expect - 1.0) <= 0.02);
    }
}

TEST_CASE("Bessel and Hankel values against the std oracle") {
    for (int n : {0, 1, 2, 5, 10, 25, 60}) {
        for (double z : {0.05, 0.7, 2.5, 9.0, 11.9, 12.1, 17.0, 40.0, 90.0}) {
            const BesselHankel b = bessel_hankel(n, z);
            const double J = oracle::J(n, z), Jp = oracle::Jp(n, z);
            CHECK(std::abs(b.J - J) <= 1e-10 * std::max(1e-300, std::abs(J)) + 1e-15);
            CHECK(std::abs(b.Jp - Jp) <= 1e-10 * std::abs(Jp) + 1e-15);
            const double Y = oracle::Y(n, z);
            if (std::abs(Y) < 1e250) CHECK(std::abs(b.H.imag() - Y) <= 1e-10 * std::abs(Y));
        }
    }
    CHECK(std::abs(bessel_hankel(0, 1e-12).J - 1.0) <= 1e-15);
    CHECK(std::abs(bessel_hankel(1, 1.0).J - 0.4400505857) <= 1e-10);
    CHECK(std::abs(bessel_hankel(-3, 2.0).J + oracle::J(3, 2.0)) <= 1e-12);
    CHECK_THROWS_AS(bessel_hankel(150, 1e-3), RangeError);
}

TEST_CASE("Hankel Wronskian") {
    const double z = 2.5;
    for (int n = 0; n <= 10; ++n) {
        const BesselHankel b = bessel_hankel(n, z);
        CHECK(std::abs(b.J * b.Hp - b.Jp * b.H - 2.0 * I / (pi * z)) <= 1e-12);
    }
}

TEST_CASE("exponential integral against a direct quadrature") {
    for (cplx w : {cplx(0.3, 0.0), cplx(1.0, 2.0), cplx(2.5, -1.0), cplx(0.2, 4.0), cplx(6.0, 0.5)}) {
        const cplx ref = oracle::e1(w);
        CHECK(std::abs(expint_e1(w) - ref) <= 1e-8 * std::abs(ref));
        CHECK(std::abs(expint_e1_scaled(w) - std::exp(w) * ref) <= 1e-8 * std::abs(std::exp(w) * ref));
    }
}

TEST_CASE("Neumann limit of the Robin half-plane function is the image sum") {
    const Vec2 y{0.3, 0.8};
    for (Vec2 x : {Vec2{0, 0.5}, Vec2{1.2, 2.0}, Vec2{-0.7, 0.1}}) {
        const cplx expect = phi_laplace(x, y) + phi_laplace({x.x, -x.y}, y);
        CHECK(std::abs(g0_robin_halfplane(x, y, 0.0).value - expect) <= 1e-14);
    }
}

TEST_CASE("Robin half-plane function: boundary residual") {
    const Vec2 y{0, 1};
    const double lam = 1.0, h = 1e-3;
    double worst = 0.0, worst_analytic = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double x1 = -3.0 + 6.0 * i / 19.0;
        const cplx up = g0_robin_halfplane({x1, h}, y, lam).value;
        const cplx down = g0_robin_halfplane({x1, -h}, y, lam).value;
        const GreensEval on = g0_robin_halfplane({x1, 0.0}, y, lam);
        worst = std::max(worst, std::abs((up - down) / (2.0 * h) + I * lam * on.value));
        worst_analytic = std::max(worst_analytic, std::abs(on.grad.y + I * lam * on.value));
    }
    CHECK(worst <= 1e-6);
    CHECK(worst_analytic <= 1e-12);
}

TEST_CASE("Robin half-plane function: finite-difference residual converges at second order") {
    const Vec2 y{0, 1}, x{0.4, 0.0};
    const cplx g = g0_robin_halfplane(x, y, 1.0).value;
    auto res = [&](double h) {
        const cplx d = (g0_robin_halfplane({x.x, h}, y, 1.0).value - g0_robin_halfplane({x.x, -h}, y, 1.0).value) / (2 * h);
        return std::abs(d + I * g);
    };
    const double order = std::log2(res(0.04) / res(0.02));
    CHECK(order >= 2.0 - 0.1);
}

TEST_CASE("Robin half-plane function: symmetry, gradient and the quadrature cross-check") {
    std::mt19937_64 g(9);
    std::uniform_real_distribution<double> u1(-2, 2), u2(0.05, 2);
    for (int i = 0; i < 10; ++i) {
        const Vec2 x{u1(g), u2(g)}, y{u1(g), u2(g)};
        for (cplx lam : {cplx(1.0), cplx(0.5), cplx(2.0)}) {
            const cplx a = g0_robin_halfplane(x, y, lam).value, b = g0_robin_halfplane(y, x, lam).value;
            CHECK(std::abs(a - b) <= 1e-6);
            const cplx q = g0_robin_halfplane_quadrature(x, y, lam).value;
            CHECK(std::abs(a - q) <= 1e-9);
        }
        const double h = 1e-5;
        const GreensEval e = g0_robin_halfplane(x, y, 1.0);
        const cplx fx = (g0_robin_halfplane(x + Vec2{h, 0}, y, 1.0).value - g0_robin_halfplane(x - Vec2{h, 0}, y, 1.0).value) / (2 * h);
        const cplx fy = (g0_robin_halfplane(x + Vec2{0, h}, y, 1.0).value - g0_robin_halfplane(x - Vec2{0, h}, y, 1.0).value) / (2 * h);
        CHECK(std::abs(e.grad.x - fx) <= 1e-5 * std::max(1.0, std::abs(fx)));
        CHECK(std::abs(e.grad.y - fy) <= 1e-5 * std::max(1.0, std::abs(fy)));
    }
}

TEST_CASE("Robin half-plane function: continuation below the line and complex impedance") {
    const Vec2 y{0.2, 0.6};
    for (Vec2 x : {Vec2{0.9, -0.3}, Vec2{-0.5, -1.5}, Vec2{0.7, -2.0}}) {
        const cplx a = g0_robin_halfplane(x, y, 1.3).value, b = g0_robin_halfplane_quadrature(x, y, 1.3).value;
        CHECK(std::abs(a - b) <= 1e-9);
    }
    const cplx lam{1.0, 0.4};
    const Vec2 x{0.5, 0.9};
    const GreensEval c = g0_robin_halfplane(x, y, lam);
    const GreensEval on = g0_robin_halfplane({x.x, 0.0}, y, lam);
    CHECK(std::isfinite(std::abs(c.value)));
    CHECK(std::abs(on.grad.y + I * lam * on.value) <= 1e-8);
    CHECK_THROWS_AS(g0_robin_halfplane(x, {0, -1}, 1.0), InputError);
}

TEST_CASE("wave parameters validation") {
    WaveParams w;
    w.d = {1, 1};
    CHECK_THROWS_AS(w.validate(), InputError);
    w.d = {0, 1};
    w.k = 0;
    CHECK_THROWS_AS(w.validate(), InputError);
    w.k = 1;
    w.lambda = cplx(1, 1);
    CHECK_NOTHROW(w.validate());
    CHECK_THROWS_AS(w.validate_scattering(), InputError);
}
