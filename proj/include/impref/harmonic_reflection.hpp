#pragma once

#include <functional>
#include <string>

#include "impref/geometry.hpp"

namespace impref {

/// Scalar field with gradient, valid on the region named by domain_tag.
struct FieldOracle {
    std::function<FieldSample(Vec2)> eval;
    bool has_gradient = true;  // false: gradients by central differences, h = 1e-5
    std::string domain_tag;

    FieldSample operator()(Vec2 p) const;
    cplx value(Vec2 p) const { return eval(p).value; }

    static FieldOracle with_gradient(std::function<FieldSample(Vec2)> f, std::string tag = "R2");
    static FieldOracle value_only(std::function<cplx(Vec2)> f, std::string tag = "R2");
};

/// Robin condition d/dn w + i lambda w = 0 on a line, n = line.normal() pointing into
/// the side where w is given. Lambda is a constant, or a callback holomorphic in the
/// local abscissa along the line (complex argument). alpha is fixed to 1.
struct RobinLineBC {
    Line line{{0.0, 0.0}, {1.0, 0.0}};
    cplx lambda{};
    std::function<cplx(cplx)> lambda_fn;  // holomorphic mode when set

    static RobinLineBC constant(cplx l, Line ln = Line({0.0, 0.0}, {1.0, 0.0}));
    static RobinLineBC holomorphic(std::function<cplx(cplx)> f, Line ln = Line({0.0, 0.0}, {1.0, 0.0}));
    bool is_holomorphic() const { return static_cast<bool>(lambda_fn); }
    cplx lambda_at(cplx s) const { return lambda_fn ? lambda_fn(s) : lambda; }
    /// Frame in which the line is {x2 = 0} and the normal points to x2 > 0.
    RigidMotion frame() const { return RigidMotion::to_canonical(line, line.anchor + line.normal()); }
};

struct DtildeOptions {
    int points = 32;             // Gauss points per panel
    double tol = 1e-10;          // successive-doubling stop
    int max_points = 1 << 14;    // per leg
    bool fd_gradient = false;    // force central differences even if the oracle has gradients
    bool negate_kernel_phase = false;  // test hook: V with exp(+i lambda (y2 + x2)), a wrong kernel
};

/// V with its y-gradient.
struct KernelEval {
    cplx value{};
    CVec2 grad{};
};

/// -4 exp(-i lambda (y2 + xt2)) sinh(lambda (y1 - xt1)), line frame coordinates.
cplx v_kernel_line(Vec2 y, Vec2 xt, cplx lambda);
KernelEval v_kernel_line_eval(Vec2 y, Vec2 xt, cplx lambda, bool negate_phase = false);

/// V1 - V2 with
///   V1 = 1 - 2 exp(-i int_{z0}^{w} beta),  V2 = 1 - 2 exp(i int_{w0}^{z} beta),
///   z = y1 + i y2, w = y1 - i y2, z0 = xt1 + i xt2, w0 = xt1 - i xt2, beta = i lambda(.).
/// Line frame coordinates; the integrals run along straight complex segments.
/// Throws ConvergenceError if either integral fails to converge.
KernelEval v_kernel_general(Vec2 y, Vec2 xt, const RobinLineBC& bc, double tol = 1e-13);

/// Value at x (Omega+ side, line frame given by bc) of the reflected extension,
/// i.e. w~(R x), from the path form
///   w(x) + (1/2i) int V (d2w dy1 - d1w dy2) - (1/2i) int w (d2V dy1 - d1V dy2),
/// V = V(y; R x). The path must start on the line and end at x.
/// lambda = 0 returns w(x) without quadrature. Requires constant lambda.
/// Throws InputError for a path that leaves the closed upper side or misses its ends,
/// RangeError when |lambda (y1 - x1)| > 300 on the path, ConvergenceError on quadrature failure.
cplx dtilde_apply(const FieldOracle& w, const PathCurve& path, const RobinLineBC& bc, Vec2 x,
                  const DtildeOptions& opt = {});

/// Vertical-path form w(x) + 2 i lambda e^{i lambda x2} int_0^{x2} e^{-i lambda s} w(x1, s) ds
/// (line frame); needs values only.
cplx dtilde_apply_vertical(const FieldOracle& w, const RobinLineBC& bc, Vec2 x, const DtildeOptions& opt = {});

/// w~(x) for x on the far side of the line with holomorphic lambda; the path runs from
/// the line to R x. Constant lambda reduces to dtilde_apply at R x.
cplx extend_general(const FieldOracle& w, const PathCurve& path, const RobinLineBC& bc, Vec2 x,
                    const DtildeOptions& opt = {});

}  // namespace impref
