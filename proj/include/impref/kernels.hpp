#pragma once

#include "impref/types.hpp"

namespace impref {

/// Wavenumber, impedance and incident direction.
struct WaveParams {
    double k = 1.0;
    cplx lambda{};
    Vec2 d{1.0, 0.0};

    /// Throws InputError unless |d| = 1 (1e-12) and k != 0.
    void validate() const;
    /// Additionally requires k > 0 and real lambda >= 0 (forward problem).
    void validate_scattering() const;
};

/// Value and x-gradient of a Green's function.
struct GreensEval {
    cplx value{};
    CVec2 grad{};
};

/// -(1/2pi) log|x - y|. Throws InputError for x = y.
double phi_laplace(Vec2 x, Vec2 y);
GreensEval phi_laplace_eval(Vec2 x, Vec2 y);

/// (i/4) H0^(1)(k|x - y|) with its x-gradient; k > 0.
GreensEval phi_helmholtz(Vec2 x, Vec2 y, double k);

struct BesselJY {
    double J = 0, Jp = 0, Y = 0, Yp = 0;
};

/// J_n, Y_n and derivatives for integer |n| <= 200 and z > 0.
/// Ascending series below |z| = 12, Hankel asymptotics above, three-term
/// recurrences for higher orders (backward for J above the turning point).
/// Throws RangeError when Y_n overflows.
BesselJY bessel_jy(int n, double z);

struct BesselHankel {
    double J = 0, Jp = 0;
    cplx H{}, Hp{};  // first kind Hankel H^(1) = J + iY
};

BesselHankel bessel_hankel(int n, double z);

/// H0^(1)(z) and H1^(1)(z), z > 0; the fast path used by the layer kernels.
void hankel01(double z, cplx& h0, cplx& h1);

/// Exponential integral E1 on the principal branch (cut along the negative real axis).
cplx expint_e1(cplx w);
/// exp(w) * E1(w), finite where E1 itself would overflow or underflow.
cplx expint_e1_scaled(cplx w);

/// Green's function of the Laplacian in the upper half-plane with
/// d/dx2 G + i lambda G = 0 on x2 = 0:
///   G0(x;y) = Phi(x;y) - Phi(x;y*) + (i/2pi) [K(c+) + K(c-)],
///   c+- = x2 + y2 +- i (x1 - y1),  K(c) = -i e^{-i lambda c} E1(-i lambda c).
/// y must lie in the open upper half-plane. x may lie anywhere except y and y*; for
/// x2 < -y2 the analytic continuation around the image ray {y1} x (-inf, -y2) is used.
/// lambda = 0 returns the Neumann image sum. Real lambda >= 0 uses the closed form;
/// complex lambda (Re lambda > 0) falls back to g0_robin_halfplane_quadrature.
GreensEval g0_robin_halfplane(Vec2 x, Vec2 y, cplx lambda);

/// Same function from its image-line integral
///   Phi(x;y) + Phi(x;y*) + 2 i lambda int_0^inf e^{i lambda t} Phi(x; y* - t e2) dt,
/// with the t-contour turned into the upper half-plane beyond the nearest singularity.
/// Independent of the E1 evaluator; used as its cross-check.
GreensEval g0_robin_halfplane_quadrature(Vec2 x, Vec2 y, cplx lambda, double tol = 1e-12);

}  // namespace impref
