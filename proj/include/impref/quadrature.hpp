#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "impref/types.hpp"

namespace impref::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Cached rule; the reference stays valid for the program lifetime.
const GaussRule& gauss_legendre(int n);

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(cplx v) { return std::abs(v); }
inline double magnitude(const CVec2& v) { return std::max(std::abs(v.x), std::abs(v.y)); }

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    int evaluations = 0;
    bool converged = true;
};

/// n-point Gauss-Legendre on [a, b].
template <class F>
auto fixed(F&& f, double a, double b, int n) {
    const GaussRule& r = gauss_legendre(n);
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    using T = decltype(f(a));
    T s{};
    for (int i = 0; i < n; ++i) s += f(c + h * r.x[i]) * (h * r.w[i]);
    return s;
}

/// Composite n-point rule with 2^m equal panels, m = 0, 1, ... until two successive
/// totals differ by less than tol (absolute, or relative to the total) or the point
/// budget is spent.
template <class F>
auto doubling(F&& f, double a, double b, int n = 32, double tol = 1e-10, int max_points = 1 << 14) {
    using T = decltype(f(a));
    Result<T> res;
    T prev = fixed(f, a, b, n);
    res.evaluations = n;
    for (int panels = 2; panels * n <= max_points; panels *= 2) {
        T cur{};
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) cur += fixed(f, a + p * h, a + (p + 1) * h, n);
        res.evaluations += panels * n;
        const double diff = magnitude(cur - prev);
        prev = cur;
        if (diff <= tol * std::max(1.0, magnitude(cur))) {
            res.value = cur;
            res.error = diff;
            return res;
        }
        res.error = diff;
    }
    res.value = prev;
    res.converged = false;
    return res;
}

namespace detail {
template <class F, class T>
void adaptive_step(F& f, double a, double b, T whole, double tol, int n, int depth, Result<T>& res) {
    const double m = 0.5 * (a + b);
    T left = fixed(f, a, m, n), right = fixed(f, m, b, n);
    res.evaluations += 2 * n;
    const double diff = magnitude(left + right - whole);
    if (diff <= tol || depth <= 0) {
        if (diff > tol) res.converged = false;
        res.value += left + right;
        res.error += diff;
        return;
    }
    adaptive_step(f, a, m, left, 0.5 * tol, n, depth - 1, res);
    adaptive_step(f, m, b, right, 0.5 * tol, n, depth - 1, res);
}
}  // namespace detail

/// Recursive bisection; panels are accepted when the two-half estimate agrees with the
/// whole-panel estimate within the local share of tol (absolute).
template <class F>
auto adaptive(F&& f, double a, double b, double tol, int n = 12, int max_depth = 40) {
    using T = decltype(f(a));
    Result<T> res;
    T whole = fixed(f, a, b, n);
    res.evaluations = n;
    detail::adaptive_step(f, a, b, whole, tol, n, max_depth, res);
    return res;
}

/// Integral over [a, b] of an integrand that is nearly singular at t_star, at distance
/// scale delta (in parameter units). Panels grow geometrically away from t_star.
template <class F>
auto graded(F&& f, double a, double b, double t_star, double delta, int n = 12) {
    using T = decltype(f(a));
    T s{};
    delta = std::max(delta, 1e-14 * std::max(1.0, std::abs(b - a)));
    auto sweep = [&](double from, double to) {
        const double len = std::abs(to - from);
        if (len <= 0.0) return;
        const double dir = to > from ? 1.0 : -1.0;
        double lo = 0.0, hi = std::min(delta, len);
        while (true) {
            s += fixed(f, std::min(from + dir * lo, from + dir * hi), std::max(from + dir * lo, from + dir * hi), n);
            if (hi >= len) break;
            lo = hi;
            hi = std::min(2.0 * hi, len);
        }
    };
    t_star = std::clamp(t_star, a, b);
    sweep(t_star, a);
    sweep(t_star, b);
    return s;
}

}  // namespace impref::quad
