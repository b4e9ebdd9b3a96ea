#include "impref/area_quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "impref/quadrature.hpp"

namespace impref {

namespace {

double polygon_area(const std::vector<Vec2>& p) { return std::abs(signed_area(p)); }

double triangle_distance(const Triangle& t, const Segment& s) {
    double d = std::min({s.distance_to(t[0]), s.distance_to(t[1]), s.distance_to(t[2])});
    for (int i = 0; i < 3; ++i) {
        const Segment e(t[i], t[(i + 1) % 3]);
        d = std::min({d, e.distance_to(s.a), e.distance_to(s.b)});
        if (segment_intersection(t[i], t[(i + 1) % 3], s.a, s.b)) return 0.0;
    }
    return d;
}

void refine(const Triangle& t, const std::vector<Segment>& cuts, double radius, int depth, std::vector<Triangle>& out) {
    bool near = false;
    for (const Segment& s : cuts)
        if (triangle_distance(t, s) < radius) near = true;
    if (depth <= 0 || !near) {
        out.push_back(t);
        return;
    }
    const Vec2 m01 = (t[0] + t[1]) * 0.5, m12 = (t[1] + t[2]) * 0.5, m20 = (t[2] + t[0]) * 0.5;
    refine({t[0], m01, m20}, cuts, radius, depth - 1, out);
    refine({m01, t[1], m12}, cuts, radius, depth - 1, out);
    refine({m20, m12, t[2]}, cuts, radius, depth - 1, out);
    refine({m01, m12, m20}, cuts, radius, depth - 1, out);
}

}  // namespace

std::vector<std::vector<Vec2>> split_convex(const std::vector<Vec2>& poly, const Line& line, double tol) {
    std::vector<double> s(poly.size());
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        s[i] = line.signed_distance(poly[i]);
        if (s[i] > tol) pos = true;
        if (s[i] < -tol) neg = true;
    }
    if (!(pos && neg)) return {poly};
    std::vector<Vec2> a, b;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const std::size_t j = (i + 1) % poly.size();
        const double si = std::abs(s[i]) <= tol ? 0.0 : s[i];
        const double sj = std::abs(s[j]) <= tol ? 0.0 : s[j];
        if (si >= 0.0) a.push_back(poly[i]);
        if (si <= 0.0) b.push_back(poly[i]);
        if ((si > 0.0 && sj < 0.0) || (si < 0.0 && sj > 0.0)) {
            const Vec2 p = poly[i] + (poly[j] - poly[i]) * (si / (si - sj));
            a.push_back(p);
            b.push_back(p);
        }
    }
    std::vector<std::vector<Vec2>> out;
    const double scale = tol * tol;
    if (a.size() >= 3 && polygon_area(a) > scale) out.push_back(std::move(a));
    if (b.size() >= 3 && polygon_area(b) > scale) out.push_back(std::move(b));
    return out;
}

std::vector<AreaNode> area_rule(const Polygon& region, const std::vector<Segment>& cuts, Vec2 focus, const AreaQuadSpec& spec) {
    if (spec.order < 1) throw InputError("area_rule: order must be positive");
    const double diam = region.diameter();
    const double tol = 1e-12 * diam;

    std::vector<std::vector<Vec2>> pieces;
    for (const Triangle& t : triangulate(region)) pieces.push_back({t[0], t[1], t[2]});
    for (const Segment& c : cuts) {
        const Line line = c.line();
        std::vector<std::vector<Vec2>> next;
        for (const auto& p : pieces)
            for (auto& q : split_convex(p, line, tol)) next.push_back(std::move(q));
        pieces = std::move(next);
    }

    std::vector<Triangle> tris;
    const double radius = spec.tube_radius_factor * diam;
    for (const auto& p : pieces)
        for (std::size_t i = 1; i + 1 < p.size(); ++i) {
            const Triangle t{p[0], p[i], p[i + 1]};
            if (polygon_area({t[0], t[1], t[2]}) <= tol * tol) continue;
            refine(t, cuts, radius, spec.tube_depth, tris);
        }

    const quad::GaussRule& g = quad::gauss_legendre(spec.order);
    std::vector<AreaNode> nodes;
    nodes.reserve(tris.size() * static_cast<std::size_t>(spec.order * spec.order));
    for (const Triangle& t : tris) {
        int k = 0;
        for (int i = 1; i < 3; ++i)
            if (dist(t[i], focus) < dist(t[k], focus)) k = i;
        const Vec2 a = t[k], b = t[(k + 1) % 3], c = t[(k + 2) % 3];
        const double area2 = std::abs(cross(b - a, c - a));
        std::vector<double> cuts_u{1.0};
        if (dist(a, focus) <= 1e-9 * diam)
            for (int l = 0; l < spec.focus_grading; ++l) cuts_u.push_back(cuts_u.back() * 0.15);
        cuts_u.push_back(0.0);
        for (std::size_t p = 0; p + 1 < cuts_u.size(); ++p) {
            const double u0 = cuts_u[p + 1], du = cuts_u[p] - u0;
            for (int i = 0; i < spec.order; ++i) {
                const double u = u0 + 0.5 * (g.x[i] + 1.0) * du;
                for (int j = 0; j < spec.order; ++j) {
                    const double v = 0.5 * (g.x[j] + 1.0);
                    const Vec2 y = a + ((b - a) + (c - b) * v) * u;
                    nodes.push_back({y, 0.25 * g.w[i] * g.w[j] * area2 * u * du});
                }
            }
        }
    }
    return nodes;
}

}  // namespace impref
