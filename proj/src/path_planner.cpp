#include "impref/path_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "impref/geometry_io.hpp"

namespace impref {

namespace {

double joint_scale(const Polygon& a, const Polygon& b) {
    double s = 1.0;
    for (const Vec2& p : a.vertices()) s = std::max(s, norm(p));
    for (const Vec2& p : b.vertices()) s = std::max(s, norm(p));
    return s;
}

bool same_vertices(const Polygon& a, const Polygon& b, double tol) {
    if (a.size() != b.size()) return false;
    const std::size_t n = a.size();
    for (std::size_t shift = 0; shift < n; ++shift) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) ok = dist(a.vertex(i), b.vertex(i + shift)) <= tol;
        if (ok) return true;
    }
    return false;
}

// Open sector {O + s r0 + t r1 : s, t > 0}, r0 and r1 not parallel.
bool in_open_sector(Vec2 o, Vec2 r0, Vec2 r1, Vec2 p, double tol) {
    const double det = cross(r0, r1);
    const Vec2 w = p - o;
    const double s = cross(w, r1) / det, t = cross(r0, w) / det;
    return s > tol && t > tol;
}

bool line_meets_polygon(const Line& line, const Polygon& poly, double tol) {
    bool pos = false, neg = false;
    for (const Vec2& v : poly.vertices()) {
        const double s = line.signed_distance(v);
        if (std::abs(s) <= tol) return true;
        (s > 0.0 ? pos : neg) = true;
    }
    return pos && neg;
}

// Corner test shared by CaseI and the SectorPair certificate: the extensions of both sides
// beyond vertex i of `poly` are half-lines missing every polygon in `avoid` (poly itself
// touched only at the corner), and the sector they span contains none of them.
bool corner_sector_free(const Polygon& poly, std::size_t i, const std::vector<const Polygon*>& avoid, double tol,
                        Vec2& r0, Vec2& r1) {
    if (poly.interior_angle(i) >= pi - 1e-12) return false;
    const Vec2 o = poly.vertex(i);
    const Vec2 prev = poly.vertex(i + poly.size() - 1), next = poly.vertex(i + 1);
    r0 = normalized(o - prev);
    r1 = normalized(o - next);
    if (cross(r0, r1) < 0.0) std::swap(r0, r1);
    const double step = 1e-7 * std::max(1.0, poly.diameter());
    for (const Polygon* p : avoid) {
        const bool self = p == &poly;
        const Vec2 s0 = self ? o + r0 * step : o, s1 = self ? o + r1 * step : o;
        if (!self && polygon_contains(*p, o, tol) != Containment::Outside) return false;
        if (ray_meets_polygon(*p, s0, r0, tol) || ray_meets_polygon(*p, s1, r1, tol)) return false;
        for (const Vec2& v : p->vertices())
            if (in_open_sector(o, r0, r1, v, tol)) return false;
    }
    return true;
}

// Parameters along [p0, p1] where it meets [q0, q1]; both ends of a collinear overlap.
std::vector<double> hit_parameters(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1, double tol) {
    const Vec2 r = p1 - p0, s = q1 - q0;
    const double lr = norm(r), ls = norm(s);
    std::vector<double> out;
    if (std::abs(cross(r, s)) <= 1e-14 * lr * ls) {
        if (std::abs(cross(r, q0 - p0)) / lr > tol) return out;
        const double t0 = dot(q0 - p0, r) / (lr * lr), t1 = dot(q1 - p0, r) / (lr * lr);
        const double lo = std::max(0.0, std::min(t0, t1)), hi = std::min(1.0, std::max(t0, t1));
        if (lo > hi + tol / lr) return out;
        out.push_back(std::clamp(lo, 0.0, 1.0));
        out.push_back(std::clamp(hi, 0.0, 1.0));
        return out;
    }
    if (auto h = segment_intersection(p0, p1, q0, q1, tol)) out.push_back((*h)[0]);
    return out;
}

// Walks the boundary of b from point p (on edge ep) forward to point q (on edge eq).
std::vector<Vec2> boundary_arc(const Polygon& b, Vec2 p, std::size_t ep, Vec2 q, std::size_t eq, double tol) {
    std::vector<Vec2> arc{p};
    auto push = [&](Vec2 v) {
        if (dist(v, arc.back()) > tol) arc.push_back(v);
    };
    const std::size_t n = b.size();
    const bool same_edge_forward = ep == eq && dot(q - p, b.edge(ep).b - b.edge(ep).a) > 0.0;
    if (!same_edge_forward) {
        std::size_t e = ep;
        for (std::size_t guard = 0; guard <= n; ++guard) {
            push(b.vertex(e + 1));
            e = (e + 1) % n;
            if (e == eq) break;
        }
    }
    push(q);
    return arc;
}

std::size_t edge_containing(const Polygon& b, Vec2 p) {
    std::size_t best = 0;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double di = b.edge(i).distance_to(p);
        if (di < d) {
            d = di;
            best = i;
        }
    }
    return best;
}

std::optional<Polygon> try_polygon(std::vector<Vec2> v, double tol) {
    std::vector<Vec2> w;
    for (const Vec2& p : v)
        if (w.empty() || dist(p, w.back()) > tol) w.push_back(p);
    while (w.size() > 1 && dist(w.front(), w.back()) <= tol) w.pop_back();
    // drop collinear interior vertices
    bool changed = true;
    while (changed && w.size() > 3) {
        changed = false;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const Vec2 a = w[(i + w.size() - 1) % w.size()], b = w[i], c = w[(i + 1) % w.size()];
            if (std::abs(cross(b - a, c - b)) <= tol * (dist(a, b) + dist(b, c)) && dot(b - a, c - b) > 0.0) {
                w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    try {
        return Polygon(w);
    } catch (const InputError&) {
        return std::nullopt;
    }
}

std::optional<GapConfiguration> find_case_two(const Polygon& a, const Polygon& b, double tol) {
    Vec2 inner;
    {
        const Triangle t = triangulate(b).front();
        inner = (t[0] + t[1] + t[2]) / 3.0;
    }
    for (std::size_t e = 0; e < a.size(); ++e) {
        const Segment side = a.edge(e);
        std::vector<double> ts;
        for (std::size_t j = 0; j < b.size(); ++j)
            for (double t : hit_parameters(side.a, side.b, b.vertex(j), b.vertex(j + 1), tol)) ts.push_back(t);
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end(), [&](double x, double y) { return (y - x) * side.length() <= tol; }),
                 ts.end());
        for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
            const Vec2 p = side.point(ts[k]), q = side.point(ts[k + 1]);
            if (polygon_contains(b, (p + q) * 0.5, tol) != Containment::Outside) continue;
            const std::size_t ep = edge_containing(b, p), eq = edge_containing(b, q);
            for (int order = 0; order < 2; ++order) {
                std::vector<Vec2> arc = order == 0 ? boundary_arc(b, p, ep, q, eq, tol) : boundary_arc(b, q, eq, p, ep, tol);
                auto gap = try_polygon(arc, tol);
                if (!gap) continue;
                if (polygon_contains(*gap, inner, tol) != Containment::Outside) continue;
                bool outside = true;
                for (const Vec2& v : b.vertices())
                    if (polygon_contains(*gap, v, tol) == Containment::Inside) outside = false;
                if (!outside) continue;
                GapConfiguration c;
                c.kind = GapConfiguration::CaseII;
                c.l0 = Segment(p, q);
                c.gap = gap;
                c.note = "l0 on side " + std::to_string(e);
                return c;
            }
        }
    }
    return std::nullopt;
}

std::optional<GapConfiguration> find_case_one(const Polygon& a, const Polygon& b, double tol) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        Vec2 r0, r1;
        if (!corner_sector_free(a, i, {&a, &b}, tol, r0, r1)) continue;
        GapConfiguration c;
        c.kind = GapConfiguration::CaseI;
        c.corner_index = i;
        c.corner = a.vertex(i);
        c.ray0 = r0;
        c.ray1 = r1;
        c.opening = std::acos(std::clamp(dot(r0, r1), -1.0, 1.0));
        return c;
    }
    return std::nullopt;
}

// All parameters where gamma meets the closed boundary of poly.
std::vector<double> gamma_hits(const EscapePath& g, const Polygon& poly, double tol) {
    std::vector<double> out;
    const std::size_t m = g.legs();
    double reach = 1.0;
    for (const Vec2& v : poly.vertices()) reach = std::max(reach, 2.0 * dist(v, g.waypoints.back()) + 1.0);
    for (std::size_t i = 0; i <= m; ++i) {
        const Vec2 a = i < m ? g.waypoints[i] : g.waypoints.back();
        const Vec2 b = i < m ? g.waypoints[i + 1] : g.waypoints.back() + g.ray * reach;
        const double scale = i < m ? 1.0 : reach;
        for (std::size_t e = 0; e < poly.size(); ++e)
            for (double s : hit_parameters(a, b, poly.vertex(e), poly.vertex(e + 1), tol))
                out.push_back(static_cast<double>(i) + s * scale);
    }
    return out;
}

}  // namespace

GapConfiguration classify_gap(const Polygon& d1, const Polygon& d2) {
    const double scale = joint_scale(d1, d2);
    if (same_vertices(d1, d2, 1e-9 * scale)) {
        GapConfiguration c;
        c.kind = GapConfiguration::Identical;
        return c;
    }
    const double tol = 1e-10 * scale;
    for (int order = 0; order < 2; ++order) {
        const Polygon& a = order == 0 ? d1 : d2;
        const Polygon& b = order == 0 ? d2 : d1;
        if (auto c = find_case_one(a, b, tol)) {
            c->owner = order == 0 ? 1 : 2;
            c->other = order == 0 ? 2 : 1;
            return *c;
        }
    }
    for (int order = 0; order < 2; ++order) {
        const Polygon& a = order == 0 ? d1 : d2;
        const Polygon& b = order == 0 ? d2 : d1;
        if (auto c = find_case_two(a, b, tol)) {
            c->owner = order == 0 ? 1 : 2;
            c->other = order == 0 ? 2 : 1;
            return *c;
        }
    }
    GapConfiguration c;
    c.kind = GapConfiguration::Unclassified;
    c.note = "no corner or level-segment witness found (tangent configuration?)";
    return c;
}

ReflectionPlan plan_reflections(const GapConfiguration& config, const Polygon& obstacle, const EscapePath& gamma,
                                int budget) {
    if (config.kind != GapConfiguration::CaseII || !config.gap || !config.l0)
        throw InputError("plan_reflections: a CaseII configuration is required");
    if (budget < 0) throw InputError("plan_reflections: budget must be non-negative");
    const double scale = joint_scale(*config.gap, obstacle);
    const double tol = 1e-12 * scale;
    if (config.l0->distance_to(gamma.waypoints.front()) > 1e-10 * scale)
        throw InputError("plan_reflections: gamma must start on l0");

    ReflectionPlan plan;
    Polygon omega = *config.gap;
    for (int n = 0;; ++n) {
        const std::vector<double> hits = gamma_hits(gamma, omega, tol);
        if (hits.empty()) throw InputError("plan_reflections: gamma misses Omega_" + std::to_string(n));
        const double t = *std::max_element(hits.begin(), hits.end());
        const Vec2 p = gamma.point(t);
        for (const Vec2& v : omega.vertices())
            if (dist(v, p) <= 1e-9 * scale)
                throw CornerHitError("plan_reflections: gamma meets a corner of Omega_" + std::to_string(n) +
                                         "; perturb the path",
                                     static_cast<std::size_t>(n));
        if (!plan.steps.empty() && !(t > plan.steps.back().t + 1e-12))
            throw InputError("plan_reflections: gamma stops advancing at step " + std::to_string(n));
        const std::size_t side = edge_containing(omega, p);
        plan.steps.push_back({omega, t, p, side, omega.edge(side).line()});

        // termination certificates on Omega_n
        for (std::size_t e = 0; e < omega.size(); ++e)
            if (!line_meets_polygon(omega.edge(e).line(), obstacle, tol)) {
                plan.termination = ReflectionPlan::FullLine;
                plan.final_domain = static_cast<std::size_t>(n);
                plan.certificate_edge = e;
                return plan;
            }
        for (std::size_t i = 0; i < omega.size(); ++i) {
            Vec2 r0, r1;
            if (corner_sector_free(omega, i, {&obstacle}, tol, r0, r1)) {
                plan.termination = ReflectionPlan::SectorPair;
                plan.final_domain = static_cast<std::size_t>(n);
                plan.certificate_edge = i;
                plan.certificate_rays[0] = r0;
                plan.certificate_rays[1] = r1;
                return plan;
            }
        }
        if (n >= budget) {
            plan.termination = ReflectionPlan::BudgetExceeded;
            plan.final_domain = static_cast<std::size_t>(n);
            return plan;
        }
        omega = reflect_polygon(plan.steps.back().line, omega);
    }
}

bool verify_certificate(const ReflectionPlan& plan, const Polygon& obstacle) {
    if (plan.termination == ReflectionPlan::BudgetExceeded || plan.final_domain >= plan.steps.size()) return false;
    const Polygon& omega = plan.steps[plan.final_domain].domain;
    if (plan.termination == ReflectionPlan::FullLine) {
        const Segment side = omega.edge(plan.certificate_edge);
        if (segment_meets_polygon(obstacle, side.a, side.b)) return false;
        try {
            return segment_extension_classification(side, {obstacle}).kind == ExtensionClass::FullLine;
        } catch (const InputError&) {
            return false;
        }
    }
    const Vec2 o = omega.vertex(plan.certificate_edge);
    const Vec2 r0 = plan.certificate_rays[0], r1 = plan.certificate_rays[1];
    if (ray_meets_polygon(obstacle, o, r0) || ray_meets_polygon(obstacle, o, r1)) return false;
    // angular test, independent of the planner's barycentric one
    const double a0 = std::atan2(r0.y, r0.x);
    const double open = std::remainder(std::atan2(r1.y, r1.x) - a0, 2.0 * pi);
    if (!(open > 0.0)) return false;
    for (const Vec2& v : obstacle.vertices()) {
        const double a = std::remainder(std::atan2(v.y - o.y, v.x - o.x) - a0, 2.0 * pi);
        if (a > 0.0 && a < open) return false;
    }
    return true;
}

nlohmann::json plan_to_json(const ReflectionPlan& plan) {
    static const char* names[] = {"FullLine", "SectorPair", "BudgetExceeded"};
    nlohmann::json j;
    j["termination"] = names[plan.termination];
    j["final_domain"] = plan.final_domain;
    j["certificate_index"] = plan.certificate_edge;
    if (plan.termination == ReflectionPlan::SectorPair)
        j["certificate_rays"] = {{plan.certificate_rays[0].x, plan.certificate_rays[0].y},
                                 {plan.certificate_rays[1].x, plan.certificate_rays[1].y}};
    j["steps"] = nlohmann::json::array();
    for (const ReflectionStep& s : plan.steps) {
        const auto c = s.line.coefficients();
        nlohmann::json step;
        step["t"] = s.t;
        step["point"] = {s.point.x, s.point.y};
        step["side"] = s.side;
        step["line"] = {c[0], c[1], c[2]};
        step["domain"] = polygon_to_json(s.domain)["vertices"];
        step["area"] = s.domain.area();
        j["steps"].push_back(step);
    }
    return j;
}

nlohmann::json gap_to_json(const GapConfiguration& c) {
    static const char* names[] = {"Identical", "CaseI", "CaseII", "Unclassified"};
    nlohmann::json j;
    j["kind"] = names[c.kind];
    j["owner"] = c.owner;
    j["other"] = c.other;
    if (c.kind == GapConfiguration::CaseI) {
        j["corner"] = {c.corner.x, c.corner.y};
        j["corner_index"] = c.corner_index;
        j["rays"] = {{c.ray0.x, c.ray0.y}, {c.ray1.x, c.ray1.y}};
        j["opening"] = c.opening;
    }
    if (c.l0) j["l0"] = {{c.l0->a.x, c.l0->a.y}, {c.l0->b.x, c.l0->b.y}};
    if (c.gap) j["gap"] = polygon_to_json(*c.gap)["vertices"];
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

PlaneWaveVerdict plane_wave_impossibility(const Polygon& poly, const WaveParams& wave) {
    wave.validate();
    if (wave.lambda.imag() != 0.0) throw InputError("plane_wave_impossibility: real lambda required");
    const double ratio = wave.lambda.real() / wave.k;
    PlaneWaveVerdict v;
    v.consistent = true;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const double r = -(dot(poly.normal(i), wave.d) + ratio);
        v.residuals.push_back(r);
        if (std::abs(r) > 1e-12) v.consistent = false;
    }
    const std::size_t n = poly.size();
    double best = -1.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c) {
                const Vec2 na = poly.normal(a), nb = poly.normal(b), nc = poly.normal(c);
                const double x = cross(nb - na, nc - na);
                if (std::abs(x) > best) {
                    best = std::abs(x);
                    v.witness = {na, nb, nc};
                    v.witness_cross = x;
                }
            }
    return v;
}

}  // namespace impref
