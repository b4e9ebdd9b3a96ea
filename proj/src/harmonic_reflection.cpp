#include "impref/harmonic_reflection.hpp"

#include <cmath>

#include "impref/quadrature.hpp"

namespace impref {

namespace {

constexpr double fd_step = 1e-5;
constexpr double sinh_limit = 300.0;
constexpr double end_tol = 1e-10;

FieldSample central_difference(const std::function<FieldSample(Vec2)>& f, Vec2 p) {
    FieldSample s;
    s.value = f(p).value;
    s.grad.x = (f({p.x + fd_step, p.y}).value - f({p.x - fd_step, p.y}).value) / (2.0 * fd_step);
    s.grad.y = (f({p.x, p.y + fd_step}).value - f({p.x, p.y - fd_step}).value) / (2.0 * fd_step);
    return s;
}

struct LocalField {
    const FieldOracle& w;
    const RigidMotion& m;
    bool fd;

    FieldSample operator()(Vec2 q) const {
        const Vec2 g = m.to_global(q);
        const FieldSample s = (fd || !w.has_gradient) ? central_difference(w.eval, g) : w.eval(g);
        return {s.value, m.grad_to_local(s.grad)};
    }
};

std::vector<Vec2> local_waypoints(const PathCurve& path, const RigidMotion& m, Vec2 xl) {
    std::vector<Vec2> q;
    for (const Vec2& p : path.waypoints) q.push_back(m.to_local(p));
    const double scale = std::max(1.0, path.length());
    if (std::abs(q.front().y) > end_tol * scale) throw InputError("dtilde: path must start on the boundary line");
    if (dist(q.back(), xl) > end_tol * scale) throw InputError("dtilde: path must end at the evaluation point");
    for (const Vec2& p : q)
        if (p.y < -end_tol * scale) throw InputError("dtilde: path leaves the upper side of the line");
    q.front().y = 0.0;
    q.back() = xl;
    return q;
}

// Integrates the path form over every leg; kernel(y) returns V(y; xt) with gradient.
template <class Kernel>
cplx path_integral(const LocalField& f, const std::vector<Vec2>& q, Kernel&& kernel, const DtildeOptions& opt) {
    cplx total = 0.0;
    for (std::size_t i = 0; i + 1 < q.size(); ++i) {
        const Vec2 a = q[i], d = q[i + 1] - q[i];
        auto integrand = [&](double t) -> cplx {
            const Vec2 y = a + d * t;
            const FieldSample s = f(y);
            const KernelEval v = kernel(y);
            const cplx first = v.value * (s.grad.y * d.x - s.grad.x * d.y);
            const cplx second = s.value * (v.grad.y * d.x - v.grad.x * d.y);
            return (first - second) / (2.0 * I);
        };
        const auto r = quad::doubling(integrand, 0.0, 1.0, opt.points, opt.tol, opt.max_points);
        if (!r.converged) throw ConvergenceError("dtilde: path quadrature did not converge");
        total += r.value;
    }
    return total;
}

void check_excursion(const std::vector<Vec2>& q, double x1, cplx lambda) {
    for (const Vec2& p : q)
        if (std::abs(lambda) * std::abs(p.x - x1) > sinh_limit)
            throw RangeError("dtilde: |lambda (y1 - x1)| exceeds 300 on the path");
}

}  // namespace

FieldSample FieldOracle::operator()(Vec2 p) const {
    return has_gradient ? eval(p) : central_difference(eval, p);
}

FieldOracle FieldOracle::with_gradient(std::function<FieldSample(Vec2)> f, std::string tag) {
    return {std::move(f), true, std::move(tag)};
}

FieldOracle FieldOracle::value_only(std::function<cplx(Vec2)> f, std::string tag) {
    return {[f = std::move(f)](Vec2 p) { return FieldSample{f(p), {}}; }, false, std::move(tag)};
}

RobinLineBC RobinLineBC::constant(cplx l, Line ln) {
    RobinLineBC bc;
    bc.line = ln;
    bc.lambda = l;
    return bc;
}

RobinLineBC RobinLineBC::holomorphic(std::function<cplx(cplx)> f, Line ln) {
    RobinLineBC bc;
    bc.line = ln;
    bc.lambda_fn = std::move(f);
    return bc;
}

cplx v_kernel_line(Vec2 y, Vec2 xt, cplx lambda) {
    return -4.0 * std::exp(-I * lambda * (y.y + xt.y)) * std::sinh(lambda * (y.x - xt.x));
}

KernelEval v_kernel_line_eval(Vec2 y, Vec2 xt, cplx lambda, bool negate_phase) {
    const double p = negate_phase ? -1.0 : 1.0;
    const cplx e = std::exp(-p * I * lambda * (y.y + xt.y));
    const cplx arg = lambda * (y.x - xt.x);
    KernelEval k;
    k.value = -4.0 * e * std::sinh(arg);
    k.grad.x = -4.0 * lambda * e * std::cosh(arg);
    k.grad.y = -p * I * lambda * k.value;
    return k;
}

KernelEval v_kernel_general(Vec2 y, Vec2 xt, const RobinLineBC& bc, double tol) {
    const cplx z{y.x, y.y}, w{y.x, -y.y};
    const cplx z0{xt.x, xt.y}, w0{xt.x, -xt.y};
    auto beta = [&](cplx s) { return I * bc.lambda_at(s); };
    auto segment = [&](cplx from, cplx to) {
        if (from == to) return cplx{};
        const cplx d = to - from;
        const auto r = quad::adaptive([&](double t) { return beta(from + d * t) * d; }, 0.0, 1.0, tol, 12, 30);
        if (!r.converged || !std::isfinite(std::abs(r.value)))
            throw ConvergenceError("v_kernel_general: impedance integral did not converge");
        return r.value;
    };
    const cplx e1 = std::exp(-I * segment(z0, w));
    const cplx e2 = std::exp(I * segment(w0, z));
    const cplx dv1 = 2.0 * I * beta(w) * e1;   // dV1/dw
    const cplx dv2 = -2.0 * I * beta(z) * e2;  // dV2/dz
    KernelEval k;
    k.value = (1.0 - 2.0 * e1) - (1.0 - 2.0 * e2);
    k.grad.x = dv1 - dv2;
    k.grad.y = -I * dv1 - I * dv2;
    return k;
}

cplx dtilde_apply(const FieldOracle& w, const PathCurve& path, const RobinLineBC& bc, Vec2 x, const DtildeOptions& opt) {
    if (bc.is_holomorphic()) throw InputError("dtilde_apply: constant lambda required; use extend_general");
    const RigidMotion m = bc.frame();
    const Vec2 xl = m.to_local(x);
    if (!(xl.y > 0.0)) throw InputError("dtilde_apply: evaluation point must lie on the upper side");
    const std::vector<Vec2> q = local_waypoints(path, m, xl);
    const LocalField f{w, m, opt.fd_gradient};
    if (bc.lambda == 0.0) return f(xl).value;
    check_excursion(q, xl.x, bc.lambda);
    const Vec2 xt{xl.x, -xl.y};
    auto kernel = [&](Vec2 y) { return v_kernel_line_eval(y, xt, bc.lambda, opt.negate_kernel_phase); };
    return f(xl).value + path_integral(f, q, kernel, opt);
}

cplx dtilde_apply_vertical(const FieldOracle& w, const RobinLineBC& bc, Vec2 x, const DtildeOptions& opt) {
    if (bc.is_holomorphic()) throw InputError("dtilde_apply_vertical: constant lambda required");
    const RigidMotion m = bc.frame();
    const Vec2 xl = m.to_local(x);
    if (xl.y < 0.0) throw InputError("dtilde_apply_vertical: evaluation point must lie on the upper side");
    auto value = [&](Vec2 q) { return w.value(m.to_global(q)); };
    const cplx wx = value(xl);
    if (bc.lambda == 0.0 || xl.y == 0.0) return wx;
    const cplx lam = bc.lambda;
    auto integrand = [&](double s) { return std::exp(-I * lam * s) * value({xl.x, s}); };
    const auto r = quad::doubling(integrand, 0.0, xl.y, opt.points, opt.tol, opt.max_points);
    if (!r.converged) throw ConvergenceError("dtilde_apply_vertical: quadrature did not converge");
    return wx + 2.0 * I * lam * std::exp(I * lam * xl.y) * r.value;
}

cplx extend_general(const FieldOracle& w, const PathCurve& path, const RobinLineBC& bc, Vec2 x, const DtildeOptions& opt) {
    const RigidMotion m = bc.frame();
    const Vec2 xt = m.to_local(x);
    if (!(xt.y < 0.0)) throw InputError("extend_general: evaluation point must lie on the lower side");
    const Vec2 xl{xt.x, -xt.y};
    const std::vector<Vec2> q = local_waypoints(path, m, xl);
    const LocalField f{w, m, opt.fd_gradient};
    if (!bc.is_holomorphic()) {
        if (bc.lambda == 0.0) return f(xl).value;
        check_excursion(q, xl.x, bc.lambda);
    }
    auto kernel = [&](Vec2 y) {
        return bc.is_holomorphic() ? v_kernel_general(y, xt, bc) : v_kernel_line_eval(y, xt, bc.lambda, opt.negate_kernel_phase);
    };
    return f(xl).value + path_integral(f, q, kernel, opt);
}

}  // namespace impref
