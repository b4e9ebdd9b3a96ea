#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "impref/kernels.hpp"

namespace impref {

namespace {

constexpr double switch_radius = 12.0;

struct JY01 {
    double j0, j1, y0, y1;
};

JY01 series01(double z) {
    const double q = 0.25 * z * z;
    double t0 = 1.0, t1 = 0.5 * z;
    double j0 = t0, j1 = t1;
    double s0 = 0.0;                              // harmonic-number weighted sums
    double s1 = t1 * (1.0 - 2.0 * euler_gamma);
    double h = 0.0;                               // H_m
    for (int m = 1; m < 200; ++m) {
        t0 *= -q / (double(m) * m);
        t1 *= -q / (double(m) * (m + 1));
        const double hm = h + 1.0 / m;
        j0 += t0;
        j1 += t1;
        s0 += -t0 * hm;  // (-1)^{m+1} H_m q^m / (m!)^2
        s1 += t1 * (hm + hm + 1.0 / (m + 1) - 2.0 * euler_gamma);
        h = hm;
        if (std::abs(t0) < 1e-18 * std::abs(j0) && std::abs(t1) < 1e-18 * std::abs(j1) && m > 2) break;
    }
    const double lg = std::log(0.5 * z);
    JY01 r{};
    r.j0 = j0;
    r.j1 = j1;
    r.y0 = (2.0 / pi) * (lg + euler_gamma) * j0 + (2.0 / pi) * s0;
    r.y1 = (2.0 / pi) * lg * j1 - 2.0 / (pi * z) - s1 / pi;
    return r;
}

// Hankel asymptotic expansion, orders 0 and 1; terms stop at the smallest one.
void asymptotic(double nu, double z, double& j, double& y) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0, q = 0.0;
    double term = 1.0;
    double last = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 80; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * z);
        const double a = std::abs(term);
        if (a > last || a < 1e-17) break;
        last = a;
        // k odd -> Q with sign (-1)^((k-1)/2); k even -> P with sign (-1)^(k/2)
        if (k % 2 == 1)
            q += ((k / 2) % 2 == 0 ? term : -term);
        else
            p += ((k / 2) % 2 == 0 ? term : -term);
    }
    const double chi = z - (0.5 * nu + 0.25) * pi;
    const double amp = std::sqrt(2.0 / (pi * z));
    const double c = std::cos(chi), s = std::sin(chi);
    j = amp * (p * c - q * s);
    y = amp * (p * s + q * c);
}

JY01 base01(double z) {
    if (z < switch_radius) return series01(z);
    JY01 r{};
    asymptotic(0.0, z, r.j0, r.y0);
    asymptotic(1.0, z, r.j1, r.y1);
    return r;
}

// J_n by ascending series, with the prefactor formed in log scale.
double j_series(int n, double z) {
    const double q = 0.25 * z * z;
    double t = 1.0, s = 1.0;
    for (int m = 1; m < 300; ++m) {
        t *= -q / (double(m) * (m + n));
        s += t;
        if (std::abs(t) < 1e-18 * std::abs(s)) break;
    }
    const double lp = n * std::log(0.5 * z) - std::lgamma(n + 1.0);
    if (lp < -745.0) return 0.0;
    return s * std::exp(lp);
}

// Returns J_n and J_{n-1} for n >= 1.
void j_pair(int n, double z, const JY01& b, double& jn, double& jnm1) {
    if (z < switch_radius) {
        jn = j_series(n, z);
        jnm1 = n == 1 ? b.j0 : j_series(n - 1, z);
        return;
    }
    const int turn = static_cast<int>(z);
    if (n <= turn) {
        double a = b.j0, c = b.j1;
        for (int m = 1; m < n; ++m) {
            const double next = (2.0 * m / z) * c - a;
            a = c;
            c = next;
        }
        jn = c;
        jnm1 = a;
        return;
    }
    // Forward to the turning point, then ratios from a backward sweep.
    double a = b.j0, c = b.j1;
    for (int m = 1; m < turn; ++m) {
        const double next = (2.0 * m / z) * c - a;
        a = c;
        c = next;
    }
    const double j_turn = turn == 0 ? b.j0 : c;
    const int top = std::max(n, turn) + 60 + static_cast<int>(10.0 * std::sqrt(double(std::max(n, turn))));
    double r = 0.0;  // J_m / J_{m-1}
    std::vector<double> ratios(static_cast<std::size_t>(n + 1), 0.0);
    for (int m = top; m > turn; --m) {
        r = 1.0 / (2.0 * m / z - r);
        if (m <= n) ratios[static_cast<std::size_t>(m)] = r;
    }
    double val = j_turn;
    double prev = val;
    for (int m = turn + 1; m <= n; ++m) {
        prev = val;
        val *= ratios[static_cast<std::size_t>(m)];
    }
    jn = val;
    jnm1 = (n == turn + 1) ? j_turn : prev;
}

}  // namespace

BesselJY bessel_jy(int n, double z) {
    if (!(z > 0.0) || !std::isfinite(z)) throw InputError("bessel_jy: argument must be positive and finite");
    if (std::abs(n) > 200) throw InputError("bessel_jy: |order| must not exceed 200");
    const int m = std::abs(n);
    const JY01 b = base01(z);
    BesselJY r;
    if (m == 0) {
        r.J = b.j0;
        r.Y = b.y0;
        r.Jp = -b.j1;
        r.Yp = -b.y1;
        return r;
    }
    double jn, jnm1;
    j_pair(m, z, b, jn, jnm1);
    double ya = b.y0, yc = b.y1;
    for (int k = 1; k < m; ++k) {
        const double next = (2.0 * k / z) * yc - ya;
        ya = yc;
        yc = next;
        if (!std::isfinite(yc) || std::abs(yc) > 1e300) throw RangeError("bessel_jy: Y_n overflows for this order and argument");
    }
    r.J = jn;
    r.Y = yc;
    r.Jp = jnm1 - (m / z) * jn;
    r.Yp = ya - (m / z) * yc;
    if (n < 0 && (m % 2 == 1)) {
        r.J = -r.J;
        r.Y = -r.Y;
        r.Jp = -r.Jp;
        r.Yp = -r.Yp;
    }
    return r;
}

BesselHankel bessel_hankel(int n, double z) {
    const BesselJY b = bessel_jy(n, z);
    return {b.J, b.Jp, {b.J, b.Y}, {b.Jp, b.Yp}};
}

void hankel01(double z, cplx& h0, cplx& h1) {
    if (!(z > 0.0)) throw InputError("hankel01: argument must be positive");
    const JY01 b = base01(z);
    h0 = {b.j0, b.y0};
    h1 = {b.j1, b.y1};
}

}  // namespace impref
