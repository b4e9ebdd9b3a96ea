#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "impref/geometry.hpp"
#include "impref/geometry_io.hpp"

using namespace impref;

namespace {

bool near(Vec2 a, Vec2 b, double tol = 1e-12) { return dist(a, b) <= tol; }

Polygon unit_square() { return Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

}  // namespace

TEST_CASE("reflect_point examples") {
    const Line horizontal({0, 0}, {1, 0});
    CHECK(near(reflect_point(horizontal, {1, 2}), {1, -2}));
    CHECK(near(reflect_point(horizontal, {3, 0}), {3, 0}));
    CHECK(near(reflect_point(Line::through({0, 0}, {1, 1}), {1, 0}), {0, 1}));
}

TEST_CASE("line direction is normalised and reflection is an involution") {
    const Line l({0.3, -1.2}, {3, 4});
    CHECK(std::abs(norm(l.direction) - 1.0) <= 1e-12);
    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 200; ++i) {
        const Vec2 p{u(g), u(g)}, q{u(g), u(g)};
        CHECK(near(l.reflect(l.reflect(p)), p, 1e-12));
        CHECK(std::abs(dist(l.reflect(p), l.reflect(q)) - dist(p, q)) <= 1e-12);
    }
}

TEST_CASE("polygon orientation, normals and rejection of degenerate input") {
    const Polygon cw({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    CHECK(signed_area(cw.vertices()) > 0.0);
    for (std::size_t i = 0; i < cw.size(); ++i) {
        const Vec2 nu = cw.normal(i);
        CHECK(std::abs(dot(nu, cw.edge(i).direction())) <= 1e-15);
        CHECK(polygon_contains(cw, cw.edge(i).midpoint() + nu * 1e-3) == Containment::Outside);
    }
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}}), InputError);
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {2, 0}}), InputError);
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), InputError);
}

TEST_CASE("reflect_polygon examples") {
    const Polygon sq = unit_square();
    const Polygon r = reflect_polygon(Line({0, 0}, {1, 0}), sq);
    CHECK(std::abs(r.area() - 1.0) <= 1e-12);
    for (const Vec2& v : r.vertices()) CHECK((v.y <= 0.0 && v.y >= -1.0));
    const Polygon back = reflect_polygon(Line({0, 0}, {1, 0}), r);
    for (const Vec2& v : sq.vertices()) {
        bool found = false;
        for (const Vec2& w : back.vertices()) found = found || near(v, w);
        CHECK(found);
    }
    const Polygon tri = reflect_polygon(Line({0, 0}, {1, 0}), Polygon({{0, 0}, {1, 0}, {0, 1}}));
    CHECK(signed_area(tri.vertices()) > 0.0);
    std::vector<Vec2> expect{{0, 0}, {1, 0}, {0, -1}};
    for (const Vec2& e : expect) {
        bool found = false;
        for (const Vec2& w : tri.vertices()) found = found || near(e, w);
        CHECK(found);
    }
}

TEST_CASE("reflect_polygon preserves area") {
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> u(-3, 3);
    const Polygon p({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    for (int i = 0; i < 50; ++i) {
        const Line l({u(g), u(g)}, {u(g), u(g) + 3.5});
        CHECK(std::abs(reflect_polygon(l, p).area() - p.area()) <= 1e-10 * p.area());
    }
}

TEST_CASE("polygon_contains examples and boundary status") {
    const Polygon sq = unit_square();
    CHECK(polygon_contains(sq, {0.5, 0.5}) == Containment::Inside);
    CHECK(polygon_contains(sq, {2, 2}) == Containment::Outside);
    CHECK(polygon_contains(sq, {1, 0.5}) == Containment::OnBoundary);
    const Polygon ell({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    CHECK(polygon_contains(ell, {1.5, 1.5}) == Containment::Outside);
    CHECK(polygon_contains(ell, {0.5, 1.5}) == Containment::Inside);
}

TEST_CASE("winding containment agrees with crossing parity on random points") {
    const Polygon p({{0, 0}, {3, 0}, {3, 2}, {2, 0.7}, {1.2, 2.4}, {0.4, 1.1}, {-0.5, 2}});
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> u(-1, 4);
    int disagreements = 0;
    for (int i = 0; i < 10000; ++i) {
        const Vec2 q{u(g), u(g)};
        const Containment c = polygon_contains(p, q);
        if (c == Containment::OnBoundary) continue;
        if ((c == Containment::Inside) != polygon_contains_crossing(p, q)) ++disagreements;
    }
    CHECK(disagreements == 0);
}

TEST_CASE("segment_extension_classification examples") {
    const Polygon sq = unit_square();
    CHECK(segment_extension_classification(Segment({0, 2}, {1, 2}), {sq}).kind == ExtensionClass::FullLine);
    const auto half = segment_extension_classification(Segment({2, 0.5}, {3, 0.5}), {sq});
    CHECK(half.kind == ExtensionClass::HalfLine);
    CHECK(near(half.free_direction, {1, 0}));
    const Polygon left = sq.translated({-3, 0});
    CHECK(segment_extension_classification(Segment({2, 0.5}, {3, 0.5}), {sq.translated({5, 0}), left}).kind ==
          ExtensionClass::Blocked);
    CHECK_THROWS_AS(segment_extension_classification(Segment({0.2, 0.5}, {0.8, 0.5}), {sq}), InputError);
}

TEST_CASE("segment intersection and polygon queries") {
    auto h = segment_intersection({0, 0}, {2, 0}, {1, -1}, {1, 1});
    REQUIRE(h);
    CHECK(std::abs((*h)[0] - 0.5) <= 1e-15);
    CHECK(!segment_intersection({0, 0}, {1, 0}, {0, 1}, {1, 1}));
    const Polygon sq = unit_square();
    CHECK(segment_meets_polygon(sq, {-1, 0.5}, {0.5, 0.5}));
    CHECK(!segment_meets_polygon(sq, {-1, 2}, {2, 2}));
    CHECK(ray_meets_polygon(sq, {-2, 0.5}, {1, 0}));
    CHECK(!ray_meets_polygon(sq, {-2, 0.5}, {-1, 0}));
}

TEST_CASE("sector opening is restricted and containment is open") {
    const Sector s({0, 0}, 0.0, pi / 2);
    CHECK(s.contains({1, 1}));
    CHECK(!s.contains({-1, 1}));
    CHECK(!s.contains({1, 0}));
    CHECK_THROWS_AS(Sector({0, 0}, 0.0, 2.0), InputError);
    CHECK_THROWS_AS(Sector({0, 0}, 0.0, 0.0), InputError);
}

TEST_CASE("paths: parametrisation and validation") {
    const PathCurve p({{0, 0}, {0, 1}, {1, 1}});
    CHECK(near(p.point(0.0), {0, 0}));
    CHECK(near(p.point(0.75), {0.5, 1}));
    CHECK(std::abs(p.length() - 2.0) <= 1e-15);
    CHECK_THROWS_AS(PathCurve({{0, 0}}), InputError);
    const EscapePath e({{0, 0}, {0, 1}}, {1, 0});
    CHECK(near(e.point(3.0), {2, 1}));
    CHECK_THROWS_AS(EscapePath({{0, 0}, {0, 1}, {0, 0.5}}, {1, 0}), InputError);
}

TEST_CASE("rigid motion to the canonical frame") {
    const Line l({1, 2}, {1, 1});
    const RigidMotion m = RigidMotion::to_canonical(l, {0, 5});
    CHECK(std::abs(m.to_local(l.anchor + l.direction * 3.0).y) <= 1e-12);
    CHECK(m.to_local({0, 5}).y > 0.0);
    const Vec2 q{0.3, -0.7};
    CHECK(near(m.to_global(m.to_local(q)), q, 1e-12));
}

TEST_CASE("triangulation covers the polygon") {
    const Polygon p({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    double a = 0.0;
    for (const Triangle& t : triangulate(p)) a += 0.5 * std::abs(cross(t[1] - t[0], t[2] - t[0]));
    CHECK(std::abs(a - p.area()) <= 1e-12);
}

TEST_CASE("polygon json round trip") {
    const auto j = nlohmann::json::parse(R"({"vertices": [[0,0],[1,0],[0,1]], "bc": [["robin", 0.5], ["dirichlet"], {"kind": "neumann"}]})");
    const Polygon p = polygon_from_json(j);
    CHECK(p.bc(0).kind == BcKind::Robin);
    CHECK(p.bc(0).lambda == cplx(0.5));
    const Polygon q = polygon_from_json(polygon_to_json(p));
    CHECK(q.vertices() == p.vertices());
    CHECK(q.bcs() == p.bcs());
    CHECK_THROWS_AS(polygon_from_json(nlohmann::json::parse(R"({"vertices": [[0,0],[1,0]]})")), InputError);
    CHECK(complex_from_json(nlohmann::json::parse("[1, 2]")) == cplx(1, 2));
}
