#include "impref/geometry.hpp"

#include <algorithm>
#include <limits>

namespace impref {

Line::Line(Vec2 anchor_, Vec2 direction_) : anchor(anchor_) {
    const double n = norm(direction_);
    if (!(n > 0.0) || !std::isfinite(n)) throw InputError("Line: direction must be nonzero");
    direction = direction_ / n;
}

Line Line::through(Vec2 a, Vec2 b) {
    if (a == b) throw InputError("Line::through: coincident points");
    return Line(a, b - a);
}

std::array<double, 3> Line::coefficients() const {
    const Vec2 n = normal();
    return {n.x, n.y, dot(n, anchor)};
}

Vec2 reflect_point(const Line& line, Vec2 p) { return line.reflect(p); }

Segment::Segment(Vec2 a_, Vec2 b_) : a(a_), b(b_) {
    if (a == b) throw InputError("Segment: endpoints coincide");
}

double Segment::distance_to(Vec2 p) const {
    const Vec2 d = b - a;
    const double t = std::clamp(dot(p - a, d) / dot(d, d), 0.0, 1.0);
    return dist(p, a + d * t);
}

double signed_area(const std::vector<Vec2>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * s;
}

std::optional<std::array<double, 2>> segment_intersection(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1, double tol) {
    const Vec2 r = p1 - p0, s = q1 - q0;
    const double lr = norm(r), ls = norm(s);
    const double denom = cross(r, s);
    if (std::abs(denom) <= 1e-14 * lr * ls) {
        if (std::abs(cross(r, q0 - p0)) / lr > tol) return std::nullopt;
        const double t0 = dot(q0 - p0, r) / (lr * lr), t1 = dot(q1 - p0, r) / (lr * lr);
        const double lo = std::max(0.0, std::min(t0, t1)), hi = std::min(1.0, std::max(t0, t1));
        const double et = tol / lr;
        if (lo > hi + et) return std::nullopt;
        const double sp = std::clamp(lo, 0.0, 1.0);
        const double tq = std::clamp(dot(p0 + r * sp - q0, s) / (ls * ls), 0.0, 1.0);
        return std::array<double, 2>{sp, tq};
    }
    const Vec2 w = q0 - p0;
    const double sp = cross(w, s) / denom, tq = cross(w, r) / denom;
    const double es = tol / lr, et = tol / ls;
    if (sp < -es || sp > 1.0 + es || tq < -et || tq > 1.0 + et) return std::nullopt;
    return std::array<double, 2>{std::clamp(sp, 0.0, 1.0), std::clamp(tq, 0.0, 1.0)};
}

Polygon::Polygon(std::vector<Vec2> vertices, std::vector<BoundaryCondition> bc) : v_(std::move(vertices)) {
    const std::size_t n = v_.size();
    if (n < 3) throw InputError("Polygon: at least three vertices required");
    for (const Vec2& p : v_)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InputError("Polygon: non-finite vertex");
    if (bc.empty()) bc.assign(n, BoundaryCondition::neumann());
    if (bc.size() == 1) bc.assign(n, bc.front());
    if (bc.size() != n) throw InputError("Polygon: one boundary condition per edge required");
    for (std::size_t i = 0; i < n; ++i)
        if (v_[i] == v_[(i + 1) % n]) throw InputError("Polygon: repeated consecutive vertex");
    const double a = signed_area(v_);
    if (!(std::abs(a) > 0.0)) throw InputError("Polygon: zero area");
    if (a < 0.0) {
        std::vector<Vec2> w(n);
        std::vector<BoundaryCondition> c(n);
        for (std::size_t j = 0; j < n; ++j) {
            w[j] = v_[(n - j) % n];
            c[j] = bc[(2 * n - 1 - j) % n];
        }
        v_ = std::move(w);
        bc = std::move(c);
    }
    bc_ = std::move(bc);
    const double scale = diameter();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 d0 = v_[(i + 1) % n] - v_[i], d1 = v_[(i + 2) % n] - v_[(i + 1) % n];
        if (std::abs(cross(d0, d1)) <= 1e-14 * norm(d0) * norm(d1) && dot(d0, d1) < 0.0)
            throw InputError("Polygon: edge folds back on its neighbour");
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            if (segment_intersection(v_[i], v_[(i + 1) % n], v_[j], v_[(j + 1) % n], 1e-13 * scale))
                throw InputError("Polygon: self-intersecting boundary");
        }
    }
}

double Polygon::area() const { return signed_area(v_); }

double Polygon::diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i)
        for (std::size_t j = i + 1; j < v_.size(); ++j) d = std::max(d, dist(v_[i], v_[j]));
    return d;
}

double Polygon::perimeter() const {
    double p = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) p += edge(i).length();
    return p;
}

std::array<Vec2, 2> Polygon::bounding_box() const {
    Vec2 lo = v_[0], hi = v_[0];
    for (const Vec2& p : v_) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    return {lo, hi};
}

double Polygon::interior_angle(std::size_t i) const {
    const std::size_t n = v_.size();
    const Vec2 prev = vertex(i + n - 1), cur = vertex(i), next = vertex(i + 1);
    const Vec2 a = prev - cur, b = next - cur;
    double ang = std::atan2(cross(b, a), dot(b, a));
    if (ang <= 0.0) ang += 2.0 * pi;
    return ang;
}

Polygon Polygon::translated(Vec2 shift) const {
    std::vector<Vec2> w = v_;
    for (Vec2& p : w) p += shift;
    return Polygon(std::move(w), bc_);
}

Polygon reflect_polygon(const Line& line, const Polygon& poly) {
    const std::size_t n = poly.size();
    std::vector<Vec2> w(n);
    std::vector<BoundaryCondition> c(n);
    for (std::size_t j = 0; j < n; ++j) {
        w[j] = line.reflect(poly.vertex((n - j) % n));
        c[j] = poly.bc((2 * n - 1 - j) % n);
    }
    return Polygon(std::move(w), std::move(c));
}

double distance_to_boundary(const Polygon& poly, Vec2 p) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) d = std::min(d, poly.edge(i).distance_to(p));
    return d;
}

Containment polygon_contains(const Polygon& poly, Vec2 p, double tol) {
    if (distance_to_boundary(poly, p) <= tol) return Containment::OnBoundary;
    int wn = 0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly.vertex(i), b = poly.vertex(i + 1);
        const double side = cross(b - a, p - a);
        if (a.y <= p.y) {
            if (b.y > p.y && side > 0.0) ++wn;
        } else if (b.y <= p.y && side < 0.0) {
            --wn;
        }
    }
    return wn != 0 ? Containment::Inside : Containment::Outside;
}

bool polygon_contains_crossing(const Polygon& poly, Vec2 p) {
    bool in = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = poly.vertex(i), b = poly.vertex(j);
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xc) in = !in;
        }
    }
    return in;
}

bool segment_meets_polygon(const Polygon& poly, Vec2 a, Vec2 b, double tol) {
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (segment_intersection(a, b, poly.vertex(i), poly.vertex(i + 1), tol)) return true;
    return polygon_contains(poly, a, tol) != Containment::Outside;
}

bool ray_meets_polygon(const Polygon& poly, Vec2 origin, Vec2 dir, double tol) {
    const auto box = poly.bounding_box();
    const double reach = dist(origin, (box[0] + box[1]) * 0.5) + dist(box[0], box[1]) + 1.0;
    return segment_meets_polygon(poly, origin, origin + normalized(dir) * reach, tol);
}

ExtensionClass segment_extension_classification(const Segment& seg, const std::vector<Polygon>& obstacles) {
    const double len = seg.length();
    if (!(len > 1e-12)) throw InputError("segment_extension_classification: degenerate segment");
    for (const Polygon& obs : obstacles)
        if (polygon_contains(obs, seg.midpoint(), 1e-12 * len) == Containment::Inside)
            throw InputError("segment_extension_classification: segment lies inside an obstacle");
    const Vec2 d = seg.direction();
    auto blocked = [&](Vec2 origin, Vec2 dir) {
        for (const Polygon& obs : obstacles)
            if (ray_meets_polygon(obs, origin, dir)) return true;
        return false;
    };
    const bool fwd = blocked(seg.b, d), bwd = blocked(seg.a, -d);
    if (!fwd && !bwd) return {ExtensionClass::FullLine, {}};
    if (fwd && bwd) return {ExtensionClass::Blocked, {}};
    return {ExtensionClass::HalfLine, fwd ? -d : d};
}

Sector::Sector(Vec2 apex_, double start_, double opening_) : apex(apex_), start(start_), opening(opening_) {
    if (!(opening > 0.0) || opening > 0.5 * pi + 1e-15) throw InputError("Sector: opening must lie in (0, pi/2]");
}

bool Sector::contains(Vec2 p) const {
    const Vec2 d = p - apex;
    if (norm(d) == 0.0) return false;
    double a = std::atan2(d.y, d.x) - start;
    a = std::remainder(a, 2.0 * pi);
    return a > 0.0 && a < opening;
}

PathCurve::PathCurve(std::vector<Vec2> pts) : waypoints(std::move(pts)) {
    if (waypoints.size() < 2) throw InputError("PathCurve: at least two waypoints required");
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i)
        if (waypoints[i] == waypoints[i + 1]) throw InputError("PathCurve: zero-length leg");
}

Vec2 PathCurve::point(double t) const {
    const double s = std::clamp(t, 0.0, 1.0) * static_cast<double>(legs());
    const std::size_t i = std::min(static_cast<std::size_t>(s), legs() - 1);
    return waypoints[i] + (waypoints[i + 1] - waypoints[i]) * (s - static_cast<double>(i));
}

double PathCurve::length() const {
    double l = 0.0;
    for (std::size_t i = 0; i < legs(); ++i) l += dist(waypoints[i], waypoints[i + 1]);
    return l;
}

bool PathCurve::avoids(const Polygon& region) const {
    for (std::size_t i = 0; i < legs(); ++i)
        if (segment_meets_polygon(region, waypoints[i], waypoints[i + 1])) return false;
    return true;
}

bool PathCurve::inside(const Polygon& region, double tol) const {
    for (std::size_t i = 0; i < legs(); ++i) {
        const Vec2 a = waypoints[i], b = waypoints[i + 1];
        for (int k = 0; k <= 64; ++k)
            if (polygon_contains(region, a + (b - a) * (k / 64.0), tol) == Containment::Outside) return false;
        for (std::size_t e = 0; e < region.size(); ++e) {
            const Vec2 p = region.vertex(e), q = region.vertex(e + 1);
            const double d = cross(b - a, q - p);
            if (std::abs(d) < 1e-14) continue;
            const double s = cross(p - a, q - p) / d, t = cross(p - a, b - a) / d;
            if (s > 1e-9 && s < 1 - 1e-9 && t > 1e-9 && t < 1 - 1e-9) return false;
        }
    }
    return true;
}

EscapePath::EscapePath(std::vector<Vec2> pts, Vec2 ray_dir) : waypoints(std::move(pts)) {
    if (waypoints.empty()) throw InputError("EscapePath: at least one waypoint required");
    if (!(norm(ray_dir) > 0.0)) throw InputError("EscapePath: ray direction must be nonzero");
    ray = normalized(ray_dir);
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i)
        if (waypoints[i] == waypoints[i + 1]) throw InputError("EscapePath: zero-length leg");
    // Pieces: legs 0..m-1 and the ray; non-adjacent pieces must be disjoint.
    const std::size_t m = legs();
    const auto box_reach = [&] {
        double r = 1.0;
        for (const Vec2& p : waypoints) r = std::max(r, norm(p - waypoints.back()));
        return 4.0 * r;
    }();
    auto piece = [&](std::size_t i) -> std::array<Vec2, 2> {
        if (i < m) return {waypoints[i], waypoints[i + 1]};
        return {waypoints.back(), waypoints.back() + ray * box_reach};
    };
    for (std::size_t i = 0; i <= m; ++i)
        for (std::size_t j = i + 2; j <= m; ++j) {
            const auto a = piece(i), b = piece(j);
            if (segment_intersection(a[0], a[1], b[0], b[1], 1e-12)) throw InputError("EscapePath: path is not injective");
        }
    for (std::size_t i = 0; i + 1 <= m; ++i) {
        const auto a = piece(i), b = piece(i + 1);
        const Vec2 da = a[1] - a[0], db = b[1] - b[0];
        if (std::abs(cross(da, db)) <= 1e-14 * norm(da) * norm(db) && dot(da, db) < 0.0)
            throw InputError("EscapePath: path folds back on itself");
    }
}

Vec2 EscapePath::point(double t) const {
    if (t < 0.0) t = 0.0;
    const double m = static_cast<double>(legs());
    if (t >= m) return waypoints.back() + ray * (t - m);
    const std::size_t i = static_cast<std::size_t>(t);
    return waypoints[i] + (waypoints[i + 1] - waypoints[i]) * (t - static_cast<double>(i));
}

RigidMotion RigidMotion::to_canonical(const Line& line, Vec2 upper_side_point) {
    const double side = line.signed_distance(upper_side_point);
    if (side == 0.0) throw InputError("RigidMotion: reference point lies on the line");
    const Vec2 d = side > 0.0 ? line.direction : -line.direction;
    RigidMotion m;
    m.c = d.x;
    m.s = d.y;
    m.origin = line.anchor;
    return m;
}

Vec2 RigidMotion::to_local(Vec2 p) const { return vec_to_local(p - origin); }
Vec2 RigidMotion::to_global(Vec2 q) const { return vec_to_global(q) + origin; }

Polygon RigidMotion::to_local(const Polygon& poly) const {
    std::vector<Vec2> w;
    for (const Vec2& p : poly.vertices()) w.push_back(to_local(p));
    return Polygon(std::move(w), poly.bcs());
}

std::vector<Triangle> triangulate(const Polygon& poly) {
    std::vector<Vec2> v = poly.vertices();
    std::vector<Triangle> out;
    const double scale = poly.diameter();
    while (v.size() > 3) {
        const std::size_t n = v.size();
        bool clipped = false;
        for (std::size_t i = 0; i < n && !clipped; ++i) {
            const Vec2 a = v[(i + n - 1) % n], b = v[i], c = v[(i + 1) % n];
            if (cross(b - a, c - b) <= 1e-14 * scale * scale) continue;
            bool ear = true;
            for (std::size_t j = 0; j < n && ear; ++j) {
                if (j == i || j == (i + 1) % n || j == (i + n - 1) % n) continue;
                const Vec2 p = v[j];
                if (cross(b - a, p - a) >= 0.0 && cross(c - b, p - b) >= 0.0 && cross(a - c, p - c) >= 0.0) ear = false;
            }
            if (!ear) continue;
            out.push_back({a, b, c});
            v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
            clipped = true;
        }
        if (!clipped) {
            // Only flat vertices remain clippable; drop one (zero-area ear).
            for (std::size_t i = 0; i < n && !clipped; ++i) {
                const Vec2 a = v[(i + n - 1) % n], b = v[i], c = v[(i + 1) % n];
                if (std::abs(cross(b - a, c - b)) <= 1e-14 * scale * scale) {
                    v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
                    clipped = true;
                }
            }
        }
        if (!clipped) throw InputError("triangulate: no ear found");
    }
    out.push_back({v[0], v[1], v[2]});
    return out;
}

}  // namespace impref
