#pragma once

#include <array>
#include <optional>
#include <vector>

#include "impref/types.hpp"

namespace impref {

/// Infinite line through `anchor` with unit `direction`.
struct Line {
    Vec2 anchor;
    Vec2 direction;  // |direction| = 1

    Line(Vec2 anchor_, Vec2 direction_);
    static Line through(Vec2 a, Vec2 b);

    /// Left unit normal (direction rotated by +90 degrees).
    Vec2 normal() const { return rot_ccw(direction); }
    /// Positive on the side of normal().
    double signed_distance(Vec2 p) const { return cross(direction, p - anchor); }
    Vec2 project(Vec2 p) const { return anchor + direction * dot(p - anchor, direction); }
    Vec2 reflect(Vec2 p) const { return p - normal() * (2.0 * signed_distance(p)); }
    /// Coefficients (a, b, c) of a*x + b*y = c with (a, b) = normal().
    std::array<double, 3> coefficients() const;
};

Vec2 reflect_point(const Line& line, Vec2 p);

struct Segment {
    Vec2 a;
    Vec2 b;

    Segment(Vec2 a_, Vec2 b_);
    double length() const { return dist(a, b); }
    Vec2 direction() const { return normalized(b - a); }
    Vec2 point(double t) const { return a + (b - a) * t; }
    Vec2 midpoint() const { return (a + b) * 0.5; }
    Line line() const { return Line::through(a, b); }
    double distance_to(Vec2 p) const;
    bool contains(Vec2 p, double tol = 1e-12) const { return distance_to(p) <= tol; }
};

enum class BcKind { Robin, Dirichlet, Neumann };

struct BoundaryCondition {
    BcKind kind = BcKind::Neumann;
    cplx lambda{};  // meaningful for Robin only

    static BoundaryCondition robin(cplx l) { return {BcKind::Robin, l}; }
    static BoundaryCondition dirichlet() { return {BcKind::Dirichlet, 0.0}; }
    static BoundaryCondition neumann() { return {BcKind::Neumann, 0.0}; }
    bool operator==(const BoundaryCondition&) const = default;
};

/// Simple polygon stored counterclockwise. Edge i runs from vertex i to vertex i+1.
class Polygon {
public:
    /// Clockwise input is reordered to counterclockwise keeping vertex 0 first;
    /// edge conditions follow their edges. Throws InputError for fewer than three
    /// vertices, repeated vertices, zero area or self-intersection.
    explicit Polygon(std::vector<Vec2> vertices, std::vector<BoundaryCondition> bc = {});

    std::size_t size() const { return v_.size(); }
    const std::vector<Vec2>& vertices() const { return v_; }
    Vec2 vertex(std::size_t i) const { return v_[i % v_.size()]; }
    Segment edge(std::size_t i) const { return {vertex(i), vertex(i + 1)}; }
    /// Outward unit normal of edge i.
    Vec2 normal(std::size_t i) const { return rot_cw(edge(i).direction()); }
    const BoundaryCondition& bc(std::size_t i) const { return bc_[i % bc_.size()]; }
    const std::vector<BoundaryCondition>& bcs() const { return bc_; }
    double area() const;
    double diameter() const;
    double perimeter() const;
    std::array<Vec2, 2> bounding_box() const;
    /// Interior angle at vertex i in (0, 2*pi).
    double interior_angle(std::size_t i) const;
    Polygon translated(Vec2 shift) const;

private:
    std::vector<Vec2> v_;
    std::vector<BoundaryCondition> bc_;
};

double signed_area(const std::vector<Vec2>& v);

/// Mirror image, renormalized to counterclockwise with the image of vertex 0 first.
Polygon reflect_polygon(const Line& line, const Polygon& poly);

enum class Containment { Inside, Outside, OnBoundary };

/// Winding-number containment; points within tol of an edge report OnBoundary.
Containment polygon_contains(const Polygon& poly, Vec2 p, double tol = 1e-12);
/// Even-odd crossing rule, kept as an independent second implementation.
bool polygon_contains_crossing(const Polygon& poly, Vec2 p);
double distance_to_boundary(const Polygon& poly, Vec2 p);

/// Parameters (s on [p0,p1], t on [q0,q1]) of a proper or touching intersection.
std::optional<std::array<double, 2>> segment_intersection(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1, double tol = 1e-12);
/// True if the closed segment meets the closed polygon.
bool segment_meets_polygon(const Polygon& poly, Vec2 a, Vec2 b, double tol = 1e-12);
/// True if the ray origin + s*dir, s >= 0, meets the closed polygon.
bool ray_meets_polygon(const Polygon& poly, Vec2 origin, Vec2 dir, double tol = 1e-12);

struct ExtensionClass {
    enum Kind { FullLine, HalfLine, Blocked } kind;
    Vec2 free_direction;  // set for HalfLine: direction of the unobstructed ray
};

/// Extends the segment beyond both endpoints and reports which rays avoid every
/// obstacle closure. Throws InputError for a degenerate segment or one whose
/// interior lies inside an obstacle.
ExtensionClass segment_extension_classification(const Segment& seg, const std::vector<Polygon>& obstacles);

/// Open sector between the half-lines at angles start and start + opening.
struct Sector {
    Vec2 apex;
    double start;    // angle of L0
    double opening;  // theta0 in (0, pi/2]

    Sector(Vec2 apex_, double start_, double opening_);
    Vec2 dir0() const { return {std::cos(start), std::sin(start)}; }
    Vec2 dir1() const { return {std::cos(start + opening), std::sin(start + opening)}; }
    bool contains(Vec2 p) const;
};

/// Piecewise-linear curve chi: [0, 1] -> R^2, one equal parameter share per leg.
struct PathCurve {
    std::vector<Vec2> waypoints;

    explicit PathCurve(std::vector<Vec2> pts);
    std::size_t legs() const { return waypoints.size() - 1; }
    Vec2 start() const { return waypoints.front(); }
    Vec2 end() const { return waypoints.back(); }
    Vec2 point(double t) const;
    double length() const;
    /// True if no leg meets the closed polygon.
    bool avoids(const Polygon& region) const;
    /// True if every leg lies in the closed polygon.
    bool inside(const Polygon& region, double tol = 1e-12) const;
};

/// Unbounded injective polyline: finite legs through `waypoints`, then a ray.
/// Parameter t in [i, i+1] covers leg i; t >= legs() runs along the ray at unit speed.
struct EscapePath {
    std::vector<Vec2> waypoints;
    Vec2 ray;  // unit

    EscapePath(std::vector<Vec2> pts, Vec2 ray_dir);
    std::size_t legs() const { return waypoints.size() - 1; }
    Vec2 point(double t) const;
};

/// Proper rigid motion taking a line to {x2 = 0}; a chosen side maps to x2 > 0.
struct RigidMotion {
    double c = 1.0, s = 0.0;  // rotation
    Vec2 origin;              // global point mapped to (0, 0)

    static RigidMotion to_canonical(const Line& line, Vec2 upper_side_point);
    Vec2 to_local(Vec2 p) const;
    Vec2 to_global(Vec2 q) const;
    Vec2 vec_to_local(Vec2 v) const { return {c * v.x + s * v.y, -s * v.x + c * v.y}; }
    Vec2 vec_to_global(Vec2 v) const { return {c * v.x - s * v.y, s * v.x + c * v.y}; }
    CVec2 grad_to_local(const CVec2& g) const { return {c * g.x + s * g.y, -s * g.x + c * g.y}; }
    Polygon to_local(const Polygon& poly) const;
};

using Triangle = std::array<Vec2, 3>;

/// Ear-clipping triangulation of a simple polygon.
std::vector<Triangle> triangulate(const Polygon& poly);

}  // namespace impref
