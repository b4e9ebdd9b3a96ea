#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "impref/path_planner.hpp"

using namespace impref;

namespace {

const Polygon square({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
const Polygon notch({{0, 0}, {4, 0}, {4, 4}, {3, 4}, {3, 3}, {1, 3}, {1, 4}, {0, 4}});
const Polygon vnotch({{0, 0}, {4, 0}, {4, 4}, {3, 4}, {2, 2}, {1, 4}, {0, 4}});

const Polygon& by_index(int i, const Polygon& d1, const Polygon& d2) { return i == 1 ? d1 : d2; }

void check_plan_invariants(const ReflectionPlan& plan) {
    REQUIRE(!plan.steps.empty());
    const double a0 = plan.steps.front().domain.area();
    for (std::size_t n = 0; n < plan.steps.size(); ++n) {
        const ReflectionStep& s = plan.steps[n];
        CHECK(std::abs(s.domain.area() - a0) <= 1e-9 * a0);
        CHECK(s.domain.edge(s.side).distance_to(s.point) <= 1e-12);
        if (n == 0) continue;
        CHECK(s.t > plan.steps[n - 1].t);
        // Omega_n is the mirror image of Omega_{n-1} in L_{n-1}
        const Polygon expect = reflect_polygon(plan.steps[n - 1].line, plan.steps[n - 1].domain);
        for (std::size_t i = 0; i < expect.size(); ++i) CHECK(dist(expect.vertex(i), s.domain.vertex(i)) <= 1e-12);
    }
}

}  // namespace

TEST_CASE("classification: rectangular notch is CaseII with the notch as gap") {
    const GapConfiguration c = classify_gap(notch, square);
    REQUIRE(c.kind == GapConfiguration::CaseII);
    CHECK(c.owner == 2);
    CHECK(c.other == 1);
    REQUIRE(c.l0);
    const double ends = std::min(dist(c.l0->a, {1, 4}) + dist(c.l0->b, {3, 4}), dist(c.l0->a, {3, 4}) + dist(c.l0->b, {1, 4}));
    CHECK(ends <= 1e-12);
    REQUIRE(c.gap);
    CHECK(std::abs(c.gap->area() - 2.0) <= 1e-12);
    for (const Vec2& v : c.gap->vertices()) {
        CHECK(v.x >= 1.0 - 1e-12);
        CHECK(v.x <= 3.0 + 1e-12);
        CHECK(v.y >= 3.0 - 1e-12);
    }
    // the pair order only swaps the roles
    const GapConfiguration r = classify_gap(square, notch);
    REQUIRE(r.kind == GapConfiguration::CaseII);
    CHECK(r.owner == 1);
    CHECK(r.other == 2);
}

TEST_CASE("classification: identical and overlapping obstacles") {
    const Polygon shifted_start({{4, 4}, {0, 4}, {0, 0}, {4, 0}});
    CHECK(classify_gap(square, shifted_start).kind == GapConfiguration::Identical);
    const Polygon moved({{1, 1}, {5, 1}, {5, 5}, {1, 5}});
    const GapConfiguration c = classify_gap(square, moved);
    REQUIRE(c.kind == GapConfiguration::CaseI);
    const Polygon& owner = by_index(c.owner, square, moved);
    const Polygon& other = by_index(c.other, square, moved);
    CHECK(dist(owner.vertex(c.corner_index), c.corner) <= 1e-14);
    CHECK(c.opening > 0.0);
    CHECK(c.opening < pi);
    // the two half-lines miss the other polygon
    CHECK_FALSE(ray_meets_polygon(other, c.corner + c.ray0 * 1e-9, c.ray0));
    CHECK_FALSE(ray_meets_polygon(other, c.corner + c.ray1 * 1e-9, c.ray1));
}

TEST_CASE("planner: rectangular notch terminates with a full-line certificate") {
    const GapConfiguration c = classify_gap(notch, square);
    const Polygon& obstacle = by_index(c.other, notch, square);
    for (Vec2 start : {Vec2{2, 4}, Vec2{1.8, 4}}) {
        const ReflectionPlan plan = plan_reflections(c, obstacle, EscapePath({start}, {0, 1}));
        CHECK(plan.termination == ReflectionPlan::FullLine);
        CHECK(plan.final_domain == 1);
        CHECK(plan.steps.size() <= 5);
        CHECK(verify_certificate(plan, obstacle));
        check_plan_invariants(plan);
        const Segment side = plan.steps[plan.final_domain].domain.edge(plan.certificate_edge);
        CHECK(std::abs(side.a.y - 5.0) <= 1e-12);
        CHECK(std::abs(side.b.y - 5.0) <= 1e-12);
    }
}

TEST_CASE("planner: V notch gives a sector certificate; a corner hit is an error") {
    const GapConfiguration c = classify_gap(vnotch, square);
    REQUIRE(c.kind == GapConfiguration::CaseII);
    const Polygon& obstacle = by_index(c.other, vnotch, square);
    CHECK(std::abs(c.gap->area() - 2.0) <= 1e-12);
    const ReflectionPlan plan = plan_reflections(c, obstacle, EscapePath({{1.8, 4}}, {0, 1}));
    CHECK(plan.termination == ReflectionPlan::SectorPair);
    CHECK(plan.final_domain == 1);
    CHECK(verify_certificate(plan, obstacle));
    check_plan_invariants(plan);
    // reflected apex (2, 6) lies on the vertical path
    try {
        plan_reflections(c, obstacle, EscapePath({{2, 4}}, {0, 1}));
        FAIL("corner hit not reported");
    } catch (const CornerHitError& e) {
        CHECK(e.step == 1);
    }
}

TEST_CASE("planner: bent escape path and input validation") {
    const GapConfiguration c = classify_gap(notch, square);
    const Polygon& obstacle = by_index(c.other, notch, square);
    const ReflectionPlan plan = plan_reflections(c, obstacle, EscapePath({{2.2, 4}, {2.2, 4.5}}, normalized(Vec2{1, 3})));
    CHECK(plan.termination != ReflectionPlan::BudgetExceeded);
    CHECK(verify_certificate(plan, obstacle));
    check_plan_invariants(plan);
    CHECK_THROWS_AS(plan_reflections(c, obstacle, EscapePath({{2, 3.5}}, {0, 1})), InputError);
    CHECK_THROWS_AS(plan_reflections(classify_gap(square, square), obstacle, EscapePath({{2, 4}}, {0, 1})), InputError);
    CHECK_THROWS_AS(plan_reflections(c, obstacle, EscapePath({{2, 4}}, {0, 1}), -1), InputError);
}

TEST_CASE("planner: budget exhaustion is reported, and a tampered certificate fails verification") {
    const GapConfiguration c = classify_gap(notch, square);
    const Polygon& obstacle = by_index(c.other, notch, square);
    const ReflectionPlan cut = plan_reflections(c, obstacle, EscapePath({{2, 4}}, {0, 1}), 0);
    CHECK(cut.termination == ReflectionPlan::BudgetExceeded);
    CHECK_FALSE(verify_certificate(cut, obstacle));
    ReflectionPlan bad = plan_reflections(c, obstacle, EscapePath({{2, 4}}, {0, 1}));
    bad.final_domain = 0;
    CHECK_FALSE(verify_certificate(bad, obstacle));
}

TEST_CASE("planner: immediate termination when a corner of the gap already escapes") {
    // hand-built gap whose apex points away from the obstacle
    GapConfiguration c;
    c.kind = GapConfiguration::CaseII;
    c.l0 = Segment({1, 4}, {3, 4});
    c.gap = Polygon({{1, 4}, {3, 4}, {2, 5}});
    const ReflectionPlan plan = plan_reflections(c, square, EscapePath({{2, 4}}, normalized(Vec2{0.3, 1})));
    CHECK(plan.termination == ReflectionPlan::SectorPair);
    CHECK(plan.final_domain == 0);
    CHECK(plan.steps.size() == 1);
    CHECK(dist(plan.steps[0].domain.vertex(plan.certificate_edge), {2, 5}) <= 1e-14);
    CHECK(verify_certificate(plan, square));
}

TEST_CASE("plan JSON carries steps and certificate") {
    const GapConfiguration c = classify_gap(notch, square);
    const ReflectionPlan plan = plan_reflections(c, by_index(c.other, notch, square), EscapePath({{2, 4}}, {0, 1}));
    const nlohmann::json j = plan_to_json(plan);
    CHECK(j["termination"] == "FullLine");
    CHECK(j["steps"].size() == plan.steps.size());
    CHECK(j["steps"][1]["t"].get<double>() == doctest::Approx(plan.steps[1].t));
    const nlohmann::json g = gap_to_json(c);
    CHECK(g["kind"] == "CaseII");
    CHECK(g["gap"].size() == c.gap->size());
}

TEST_CASE("plane-wave impossibility on the unit square") {
    const Polygon unit({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    WaveParams w;
    w.k = 2.0;
    w.lambda = 1.0;
    w.d = {1, 0};
    const PlaneWaveVerdict v = plane_wave_impossibility(unit, w);
    CHECK_FALSE(v.consistent);
    std::vector<double> r = v.residuals;
    std::sort(r.begin(), r.end());
    const std::vector<double> expect{-1.5, -0.5, -0.5, 0.5};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(r[i] - expect[i]) <= 1e-14);
    // three distinct normals span a non-degenerate triangle
    CHECK(std::abs(v.witness_cross) >= 1.0);
    CHECK(std::abs(cross(v.witness[1] - v.witness[0], v.witness[2] - v.witness[0]) - v.witness_cross) <= 1e-14);

    // residuals are per-edge and rotate with the polygon
    const double a = 0.7;
    std::vector<Vec2> rv;
    for (const Vec2& p : unit.vertices()) rv.push_back({std::cos(a) * p.x - std::sin(a) * p.y, std::sin(a) * p.x + std::cos(a) * p.y});
    WaveParams wr = w;
    wr.d = {std::cos(a), std::sin(a)};
    const PlaneWaveVerdict vr = plane_wave_impossibility(Polygon(rv), wr);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(vr.residuals[i] - v.residuals[i]) <= 1e-14);
}

TEST_CASE("plane-wave consistency on a single edge is possible only with two normals") {
    // d . nu = -lambda/k cannot hold for three distinct unit normals; a triangle always fails
    const Polygon tri({{0, 0}, {1, 0}, {0, 1}});
    WaveParams w;
    w.k = 1;
    w.lambda = 0.0;
    w.d = {1, 0};
    const PlaneWaveVerdict v = plane_wave_impossibility(tri, w);
    CHECK_FALSE(v.consistent);
    const double nonzero = std::count_if(v.residuals.begin(), v.residuals.end(), [](double r) { return std::abs(r) > 1e-12; });
    CHECK(nonzero >= 1);
    w.lambda = cplx(1.0, 0.5);
    CHECK_THROWS_AS(plane_wave_impossibility(tri, w), InputError);
}
