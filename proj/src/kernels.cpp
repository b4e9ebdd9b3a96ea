#include <cmath>
#include <limits>

#include "impref/kernels.hpp"
#include "impref/quadrature.hpp"

namespace impref {

void WaveParams::validate() const {
    if (!std::isfinite(k) || k == 0.0) throw InputError("wave: k must be finite and nonzero");
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) throw InputError("wave: lambda must be finite");
    if (std::abs(norm(d) - 1.0) > 1e-12) throw InputError("wave: |d| must equal 1");
}

void WaveParams::validate_scattering() const {
    validate();
    if (!(k > 0.0)) throw InputError("wave: scattering requires k > 0");
    if (lambda.imag() != 0.0 || lambda.real() < 0.0) throw InputError("wave: scattering requires real lambda >= 0");
}

double phi_laplace(Vec2 x, Vec2 y) {
    const double r = dist(x, y);
    if (r == 0.0) throw InputError("phi_laplace: coincident points");
    return -std::log(r) / (2.0 * pi);
}

GreensEval phi_laplace_eval(Vec2 x, Vec2 y) {
    const Vec2 d = x - y;
    const double r2 = dot(d, d);
    if (r2 == 0.0) throw InputError("phi_laplace: coincident points");
    GreensEval g;
    g.value = -std::log(r2) / (4.0 * pi);
    g.grad = {-d.x / (2.0 * pi * r2), -d.y / (2.0 * pi * r2)};
    return g;
}

GreensEval phi_helmholtz(Vec2 x, Vec2 y, double k) {
    if (!(k > 0.0)) throw InputError("phi_helmholtz: k must be positive");
    const Vec2 d = x - y;
    const double r = norm(d);
    if (r == 0.0) throw InputError("phi_helmholtz: coincident points");
    cplx h0, h1;
    hankel01(k * r, h0, h1);
    GreensEval g;
    g.value = 0.25 * I * h0;
    const cplx f = -0.25 * I * k * h1 / r;
    g.grad = {f * d.x, f * d.y};
    return g;
}

namespace {

cplx e1_series(cplx w) {
    cplx sum = 0.0, term = 1.0;
    for (int n = 1; n < 400; ++n) {
        term *= -w / double(n);
        const cplx add = term / double(n);
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return -euler_gamma - std::log(w) - sum;
}

// exp(w) E1(w) by the modified Lentz continued fraction; Re w >= 0 or |w| moderate.
cplx e1_scaled_cf(cplx w) {
    const double tiny = 1e-300;
    cplx b = w + 1.0;
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i < 5000; ++i) {
        const double a = -double(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const cplx del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return h;
    }
    throw ConvergenceError("expint_e1: continued fraction did not converge");
}

// exp(w) E1(w) by the divergent asymptotic series, truncated at its smallest term.
cplx e1_scaled_asymptotic(cplx w) {
    cplx sum = 0.0, term = 1.0 / w;
    double last = std::numeric_limits<double>::infinity();
    for (int n = 1; n < 200; ++n) {
        const double a = std::abs(term);
        if (a > last) break;
        sum += term;
        if (a < 1e-17 * std::abs(sum)) break;
        last = a;
        term *= -double(n) / w;
    }
    return sum;
}

bool use_series(cplx w) {
    const double r = std::abs(w);
    return r < 2.0 || (r + w.real() < 9.0 && r < 40.0);
}

}  // namespace

cplx expint_e1(cplx w) {
    if (w == 0.0) throw RangeError("expint_e1: logarithmic singularity at 0");
    if (use_series(w)) return e1_series(w);
    return expint_e1_scaled(w) * std::exp(-w);
}

cplx expint_e1_scaled(cplx w) {
    if (w == 0.0) throw RangeError("expint_e1: logarithmic singularity at 0");
    if (use_series(w)) return std::exp(w) * e1_series(w);
    if (w.real() < 0.0) {
        // left half-plane: the series stays accurate near the cut, the fraction away from it
        if (std::abs(w) >= 40.0) return e1_scaled_asymptotic(w);
        if (std::abs(w.imag()) <= 2.0) return std::exp(w) * e1_series(w);
    }
    return e1_scaled_cf(w);
}

namespace {

void check_g0_points(Vec2 x, Vec2 y) {
    if (!(y.y > 0.0)) throw InputError("g0: source must lie in the open upper half-plane");
    if (!std::isfinite(x.x) || !std::isfinite(x.y)) throw InputError("g0: non-finite target");
    if (x == y) throw InputError("g0: target coincides with source");
    if (x == Vec2{y.x, -y.y}) throw InputError("g0: target coincides with image point");
}

}  // namespace

GreensEval g0_robin_halfplane(Vec2 x, Vec2 y, cplx lambda) {
    check_g0_points(x, y);
    const Vec2 ys{y.x, -y.y};
    const GreensEval p = phi_laplace_eval(x, y);
    const GreensEval q = phi_laplace_eval(x, ys);
    if (lambda == 0.0) return {p.value + q.value, p.grad + q.grad};
    if (lambda.imag() != 0.0) return g0_robin_halfplane_quadrature(x, y, lambda);

    const double lam = lambda.real();
    const double a = x.y + y.y, b = x.x - y.x;
    GreensEval g{p.value - q.value, p.grad - q.grad};
    for (int s : {1, -1}) {
        const cplx c{a, s * b};
        cplx w = -I * lam * c;
        if (w.imag() == 0.0 && w.real() < 0.0) w = {w.real(), std::copysign(0.0, -lam)};
        cplx K = -I * expint_e1_scaled(w);
        if (a < 0.0) {
            // continuation below the image point; cut along {y1} x (-inf, -y2)
            const bool cross = (lam > 0.0) ? (s == 1 ? b < 0.0 : b >= 0.0) : (s == 1 ? b >= 0.0 : b < 0.0);
            if (cross) K += (lam > 0.0 ? 2.0 : -2.0) * pi * std::exp(w);
        }
        const cplx dK = I * (1.0 / c - lam * K);
        g.value += I / (2.0 * pi) * K;
        g.grad.x += I / (2.0 * pi) * dK * (double(s) * I);
        g.grad.y += I / (2.0 * pi) * dK;
    }
    return g;
}

GreensEval g0_robin_halfplane_quadrature(Vec2 x, Vec2 y, cplx lambda, double tol) {
    check_g0_points(x, y);
    const Vec2 ys{y.x, -y.y};
    const GreensEval p = phi_laplace_eval(x, y);
    const GreensEval q = phi_laplace_eval(x, ys);
    if (lambda == 0.0) return {p.value + q.value, p.grad + q.grad};

    // contour t = T + i sigma tau, tau >= 0, along which e^{i lambda t} decays
    double sigma;
    if (lambda.real() > 0.0)
        sigma = 1.0;
    else if (lambda.real() < 0.0)
        sigma = -1.0;
    else if (lambda.imag() > 0.0)
        sigma = 0.0;
    else
        throw InputError("g0: lambda with Re lambda = 0 requires Im lambda > 0");

    const double a = x.y + y.y, b = x.x - y.x;
    struct Acc {
        cplx v, da, db;
        Acc operator+(const Acc& o) const { return {v + o.v, da + o.da, db + o.db}; }
        Acc operator-(const Acc& o) const { return {v - o.v, da - o.da, db - o.db}; }
        Acc operator*(cplx s) const { return {v * s, da * s, db * s}; }
        Acc& operator+=(const Acc& o) { v += o.v; da += o.da; db += o.db; return *this; }
    };
    auto integrand = [&](cplx t) {
        const cplx zp = a + t + I * b, zm = a + t - I * b;
        const cplx e = std::exp(I * lambda * t);
        return Acc{e * (std::log(zp) + std::log(zm)), e * (1.0 / zp + 1.0 / zm), e * (I / zp - I / zm)};
    };
    // real t: both logarithms combine to log|.|^2, free of branch ambiguity on the image ray
    auto integrand_real = [&](double t) {
        const double s = a + t, r2 = s * s + b * b;
        const cplx e = std::exp(I * lambda * t);
        return Acc{e * std::log(r2), e * (2.0 * s / r2), e * (2.0 * b / r2)};
    };

    Acc J{};
    if (sigma == 0.0) {
        const double rate = lambda.imag();
        const double tmax = (-std::log(tol) + 10.0) / rate + std::max(0.0, -a);
        J = quad::graded(integrand_real, 0.0, tmax, -a, std::max(std::abs(b), 1e-3));
    } else {
        const double T = a > 0.0 ? 0.0 : -a + std::max(1.0, std::abs(b));
        if (T > 0.0) {
            // pieces no longer than one radian of e^{i lambda t}, each graded toward t = -a
            const int pieces = std::max(1, static_cast<int>(std::ceil(T * std::abs(lambda))));
            for (int i = 0; i < pieces; ++i) {
                const double lo = T * i / pieces, hi = T * (i + 1) / pieces;
                const double star = std::clamp(-a, lo, hi);
                const double delta = std::max(std::abs(b), std::abs(star + a));
                J += quad::graded(integrand_real, lo, hi, star, delta);
            }
        }
        const double rate = std::abs(lambda.real());
        const double tmax = (-std::log(tol) + 10.0) / rate;
        // the vertical leg passes the singularities -a -+ i b closest at tau = |b|, distance a + T
        const double gap = std::max(a + T, 1e-8);
        const cplx dir = I * sigma;
        J += quad::graded([&](double tau) { return integrand(T + dir * tau); }, 0.0, std::max(tmax, 2.0 * std::abs(b)),
                          std::abs(b), std::min(gap, 1.0 / rate)) * dir;
    }

    const cplx f = -I * lambda / (2.0 * pi);
    GreensEval g{p.value + q.value + f * J.v, p.grad + q.grad};
    g.grad.x += f * J.db;
    g.grad.y += f * J.da;
    return g;
}

}  // namespace impref
