#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace impref {

using cplx = std::complex<double>;

constexpr double pi = 3.14159265358979323846;
constexpr double euler_gamma = 0.57721566490153286061;
constexpr cplx I{0.0, 1.0};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 normalized(Vec2 a) { return a / norm(a); }
/// Rotation by -90 degrees; for a CCW boundary this maps the edge direction to the outward normal.
inline Vec2 rot_cw(Vec2 a) { return {a.y, -a.x}; }
inline Vec2 rot_ccw(Vec2 a) { return {-a.y, a.x}; }

/// Complex 2-vector, used for gradients of complex fields.
struct CVec2 {
    cplx x{};
    cplx y{};

    CVec2 operator+(const CVec2& o) const { return {x + o.x, y + o.y}; }
    CVec2 operator-(const CVec2& o) const { return {x - o.x, y - o.y}; }
    CVec2 operator*(cplx s) const { return {x * s, y * s}; }
    CVec2& operator+=(const CVec2& o) { x += o.x; y += o.y; return *this; }
};

inline cplx dot(const CVec2& g, Vec2 v) { return g.x * v.x + g.y * v.y; }

/// Value and gradient of a complex scalar field at one point.
struct FieldSample {
    cplx value{};
    CVec2 grad{};
};

/// Input rejected before any numerical work (bad geometry, bad parameters).
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numerical procedure could not reach its accuracy target.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Intermediate quantity left the representable range.
struct RangeError : std::range_error {
    using std::range_error::range_error;
};

}  // namespace impref
