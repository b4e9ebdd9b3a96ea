#include "impref/helmholtz_extension.hpp"

#include <algorithm>
#include <cmath>

#include "impref/quadrature.hpp"

namespace impref {

namespace {

RigidMotion canonical(const Line& line) { return RigidMotion::to_canonical(line, line.anchor + line.normal()); }

std::vector<Vec2> convex_hull(std::vector<Vec2> p) {
    std::sort(p.begin(), p.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) return p;
    std::vector<Vec2> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0.0) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(h[k - 1] - h[k - 2], p[i - 1] - h[k - 2]) <= 0.0) --k;
        h[k++] = p[i - 1];
    }
    h.resize(k - 1);
    return h;
}

}  // namespace

cplx dtilde_x_g0(Vec2 x, Vec2 y, const std::vector<Vec2>& path, cplx lambda) {
    const Vec2 xt{x.x, -x.y};
    cplx total = g0_robin_halfplane(x, y, lambda).value;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const Vec2 a = path[i], d = path[i + 1] - path[i];
        const double len2 = dot(d, d);
        const double t_star = std::clamp(dot(y - a, d) / len2, 0.0, 1.0);
        const double delta = dist(y, a + d * t_star) / std::sqrt(len2);
        auto integrand = [&](double t) -> cplx {
            const Vec2 c = a + d * t;
            const GreensEval g = g0_robin_halfplane(c, y, lambda);
            const KernelEval v = v_kernel_line_eval(c, xt, lambda);
            const cplx first = v.value * (g.grad.y * d.x - g.grad.x * d.y);
            const cplx second = g.value * (v.grad.y * d.x - v.grad.x * d.y);
            return (first - second) / (2.0 * I);
        };
        total += quad::graded(integrand, 0.0, 1.0, t_star, delta, 12);
    }
    return total;
}

DkResult dk_apply_detailed(const FieldOracle& u, const ExtensionRegion& region, const PathCurve& path,
                           const WaveParams& wave, Vec2 x, const DkOptions& opt) {
    wave.validate();
    const RigidMotion m = canonical(region.line);
    const Vec2 xl = m.to_local(x);
    if (!(xl.y > 0.0)) throw InputError("dk_apply: evaluation point must lie strictly on the upper side");
    if (polygon_contains(region.omega_plus, x) == Containment::Outside)
        throw InputError("dk_apply: evaluation point outside Omega+");

    DkResult res;
    const cplx lam = wave.lambda;
    if (lam == 0.0) {
        res.value = res.dtilde = u.value(x);
        return res;
    }

    const Polygon& K = region.k_region();
    const Vec2 foot_global = m.to_global({xl.x, 0.0});
    if (opt.check_region) {
        const double tol = 1e-9 * std::max(1.0, region.omega_plus.diameter());
        for (const Vec2& v : K.vertices()) {
            if (m.to_local(v).y < -tol) throw InputError("dk_apply: K crosses the line");
            if (polygon_contains(region.omega_plus, v, tol) == Containment::Outside)
                throw InputError("dk_apply: K is not contained in Omega+");
        }
        if (!path.inside(K, tol)) throw InputError("dk_apply: path leaves K");
        if (!PathCurve({foot_global, x}).inside(K, tol))
            throw InputError("dk_apply: K must contain the perpendicular drop from x to the line");
    }

    const RobinLineBC bc = RobinLineBC::constant(lam, region.line);
    res.dtilde = dtilde_apply(u, path, bc, x, opt.dtilde);

    std::vector<Vec2> q;
    for (const Vec2& p : path.waypoints) q.push_back(m.to_local(p));
    q.front().y = 0.0;
    q.back() = xl;
    std::vector<Segment> cuts;
    for (std::size_t i = 0; i + 1 < q.size(); ++i) cuts.emplace_back(q[i], q[i + 1]);
    cuts.emplace_back(Vec2{xl.x, 0.0}, xl);

    const Polygon k_local = m.to_local(K);
    const std::vector<AreaNode> nodes = area_rule(k_local, cuts, xl, region.quad);
    const Vec2 xs{xl.x, -xl.y};
    for (const AreaNode& n : nodes) {
        const cplx uy = u.value(m.to_global(n.y)) * n.weight;
        res.area_dtilde_g0 += dtilde_x_g0(xl, n.y, q, lam) * uy;
        res.area_g0 += g0_robin_halfplane(xs, n.y, lam).value * uy;
    }
    res.nodes = nodes.size();
    const double k2 = wave.k * wave.k;
    res.value = res.dtilde - k2 * res.area_dtilde_g0 + k2 * res.area_g0;
    return res;
}

cplx dk_apply(const FieldOracle& u, const ExtensionRegion& region, const PathCurve& path, const WaveParams& wave, Vec2 x,
              const DkOptions& opt) {
    return dk_apply_detailed(u, region, path, wave, x, opt).value;
}

cplx dk_apply_vertical(const FieldOracle& u, const RobinLineBC& bc, Vec2 x, const DtildeOptions& opt) {
    return dtilde_apply_vertical(u, bc, x, opt);
}

namespace {

struct SectorWalker {
    const SectorProblem& prob;
    const SectorOptions& opt;
    Line l0, l1;
    Vec2 n0, n1;  // unit normals pointing to the side of Sigma_0
    long evaluations = 0;
    int deepest = 0;

    SectorWalker(const SectorProblem& p, const SectorOptions& o)
        : prob(p), opt(o), l0(p.sector.apex, p.sector.dir0()), l1(p.sector.apex, p.sector.dir1()),
          n0(rot_ccw(p.sector.dir0())), n1(rot_cw(p.sector.dir1())) {}

    // impedance in the frame whose upward normal points to the Sigma_0 side
    cplx frame_lambda(int j) const {
        const BoundaryCondition& b = j == 0 ? prob.bc0 : prob.bc1;
        return j == 0 ? b.lambda : -b.lambda;
    }

    cplx direct(Vec2 p) {
        if (++evaluations > opt.max_evaluations) throw ConvergenceError("sector_extend: evaluation budget exhausted");
        return prob.field.value(p);
    }

    cplx eval(Vec2 p, int depth, int points) {
        const double scale = std::max(1.0, dist(p, prob.sector.apex));
        const double s0 = dot(p - l0.anchor, n0), s1 = dot(p - l1.anchor, n1);
        const double eps = 1e-14 * scale;
        if (s0 >= -eps && s1 >= -eps) return direct(p);
        const int j = (s0 < s1) ? 0 : 1;
        if (depth >= opt.max_reflections) throw RangeError("sector_extend: reflection budget exhausted");
        deepest = std::max(deepest, depth + 1);
        const Vec2 n = j == 0 ? n0 : n1;
        const double d = -(j == 0 ? s0 : s1);
        const Vec2 foot = p + n * d;  // on the line
        const Vec2 z = foot + n * d;  // mirror image, Sigma_0 side
        const BoundaryCondition& b = j == 0 ? prob.bc0 : prob.bc1;
        if (b.kind == BcKind::Dirichlet) return -eval(z, depth + 1, points);
        if (b.kind == BcKind::Neumann || b.lambda == 0.0) return eval(z, depth + 1, points);
        const cplx lam = frame_lambda(j);
        auto integrand = [&](double s) { return std::exp(-I * lam * s) * eval(foot + n * s, depth + 1, points); };
        const cplx integral = quad::fixed(integrand, 0.0, d, points);
        return eval(z, depth + 1, points) + 2.0 * I * lam * std::exp(I * lam * d) * integral;
    }

    void check_boundary() {
        const double r0 = 1.0;
        for (int j = 0; j < 2; ++j) {
            const BoundaryCondition& b = j == 0 ? prob.bc0 : prob.bc1;
            const Vec2 dir = j == 0 ? prob.sector.dir0() : prob.sector.dir1();
            const Vec2 nu = j == 0 ? n0 : -n1;  // into Sigma_j
            for (double r : {0.25 * r0, 0.5 * r0, r0, 2.0 * r0}) {
                const FieldSample s = prob.field(prob.sector.apex + dir * r);
                const cplx dn = dot(s.grad, nu);
                const double size = std::max({1.0, std::abs(s.value), std::abs(s.grad.x), std::abs(s.grad.y)});
                cplx res = 0.0;
                switch (b.kind) {
                    case BcKind::Dirichlet: res = s.value; break;
                    case BcKind::Neumann: res = dn; break;
                    case BcKind::Robin: res = dn + I * b.lambda * s.value; break;
                }
                if (std::abs(res) > opt.boundary_tol * size)
                    throw InputError("sector_extend: field violates the condition on L" + std::to_string(j));
            }
        }
    }
};

}  // namespace

SectorResult sector_extend(const SectorProblem& prob, Vec2 x, const SectorOptions& opt) {
    if (opt.max_reflections < 0 || opt.points < 2) throw InputError("sector_extend: invalid options");
    SectorWalker walk(prob, opt);
    if (opt.check_boundary) walk.check_boundary();
    SectorResult res;
    res.value = walk.eval(x, 0, opt.points);
    res.reflections = walk.deepest;
    const bool robin = (prob.bc0.kind == BcKind::Robin && prob.bc0.lambda != 0.0) ||
                       (prob.bc1.kind == BcKind::Robin && prob.bc1.lambda != 0.0);
    if (robin && res.reflections > 0) {
        const cplx check = walk.eval(x, 0, opt.points + 8);
        if (std::abs(check - res.value) > opt.monitor_tol * std::max(1.0, std::abs(res.value)))
            throw ConvergenceError("sector_extend: residual monitor tripped (quadrature not converged)");
    }
    res.evaluations = walk.evaluations;
    return res;
}

GapExtension gap_extend(const FieldOracle& u, const Polygon& gap, const Segment& l, const WaveParams& wave, Vec2 x,
                             const DkOptions& opt) {
    wave.validate();
    const Line L = l.line();
    const double scale = std::max(1.0, gap.diameter());
    const double tol = 1e-9 * scale;
    bool below = false, above = false;
    for (const Vec2& v : gap.vertices()) {
        const double s = L.signed_distance(v);
        if (s > tol) above = true;
        if (s < -tol) below = true;
    }
    if (above && below) throw InputError("gap_extend: gap must lie on one side of the line of l");
    bool on_boundary = false;
    for (std::size_t i = 0; i < gap.size(); ++i) {
        const Segment e = gap.edge(i);
        if (e.contains(l.a, tol) && e.contains(l.b, tol)) on_boundary = true;
    }
    if (!on_boundary) throw InputError("gap_extend: l must lie on one side of the gap");

    // canonical frame: line of l is x2 = 0, gap below
    const Line up = below ? L : Line(L.anchor, -L.direction);
    const RigidMotion m = canonical(up);
    const Vec2 xl = m.to_local(x);
    if (xl.y < -tol) throw InputError("gap_extend: x must lie on the far side of l");

    const Vec2 al = m.to_local(l.a), bl = m.to_local(l.b);
    const double lo = std::min(al.x, bl.x), hi = std::max(al.x, bl.x);

    auto evaluate = [&](Vec2 xq, Vec2& start) -> cplx {
        const Vec2 ql = m.to_local(xq);
        if (ql.y <= tol) return u.value(xq);
        const Vec2 foot{ql.x, 0.0};
        const Vec2 s = (ql.x >= lo && ql.x <= hi) ? foot : Vec2{0.5 * (lo + hi), 0.0};
        start = m.to_global(s);
        std::vector<Vec2> hull = convex_hull({al, bl, foot, ql, s});
        std::vector<Vec2> hull_global;
        for (const Vec2& h : hull) hull_global.push_back(m.to_global(h));
        Polygon K(hull_global);
        ExtensionRegion region{up, K, std::nullopt, {}};
        return dk_apply(u, region, PathCurve({start, xq}), wave, xq, opt);
    };

    GapExtension res;
    res.path_start = m.to_global({std::clamp(xl.x, lo, hi), 0.0});
    res.value = evaluate(x, res.path_start);
    const Vec2 probe = m.to_global({0.5 * (lo + hi), 0.05 * (hi - lo)});
    Vec2 ignored;
    res.interface_check = std::abs(evaluate(probe, ignored) - u.value(up.reflect(probe)));
    if (res.interface_check > 1e-4 * std::max(1.0, std::abs(u.value(up.reflect(probe)))))
        throw ConvergenceError("gap_extend: interface check failed beside l");
    return res;
}

}  // namespace impref
