#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "impref/geometry.hpp"
#include "impref/kernels.hpp"

namespace impref {

/// Outcome of comparing two obstacles. In CaseI the corner belongs to `owner` and the
/// sector spanned by the two side extensions misses both polygons. In CaseII the segment
/// l0 lies on a side of `owner` outside `other`, with endpoints on the boundary of `other`,
/// and cuts off the bounded gap polygon between them.
struct GapConfiguration {
    enum Kind { Identical, CaseI, CaseII, Unclassified } kind = Unclassified;
    int owner = 1;  // 1 or 2: polygon carrying the corner or l0
    int other = 2;

    // CaseI
    std::size_t corner_index = 0;
    Vec2 corner;
    Vec2 ray0, ray1;      // unit directions of the half-lines from the corner
    double opening = 0.0;

    // CaseII
    std::optional<Segment> l0;
    std::optional<Polygon> gap;

    std::string note;
};

/// Vertex sets equal within 1e-9 (any cyclic shift) count as Identical. CaseI is preferred
/// when both witnesses exist; both orders of the pair are tried.
GapConfiguration classify_gap(const Polygon& d1, const Polygon& d2);

struct ReflectionStep {
    Polygon domain;  // Omega_n
    double t;        // t_n = sup{t : gamma(t) in closure(Omega_n)}
    Vec2 point;      // P_n = gamma(t_n)
    std::size_t side;  // edge of Omega_n containing P_n
    Line line;       // L_n, the line of that edge
};

struct ReflectionPlan {
    enum Termination { FullLine, SectorPair, BudgetExceeded } termination = BudgetExceeded;
    std::vector<ReflectionStep> steps;
    std::size_t final_domain = 0;  // index of the domain carrying the certificate
    std::size_t certificate_edge = 0;  // FullLine: the edge; SectorPair: the corner vertex
    Vec2 certificate_rays[2];      // SectorPair: half-line directions from the corner
};

/// Raised when gamma meets the boundary of Omega_n at a vertex.
struct CornerHitError : InputError {
    std::size_t step;
    CornerHitError(const std::string& what, std::size_t s) : InputError(what), step(s) {}
};

/// Iterated reflections of the CaseII gap along gamma until a side of Omega_n extends to a
/// full line missing closure(obstacle) or two neighbouring sides extend to half-lines
/// spanning an obstacle-free sector. The check runs from step 0. `obstacle` is the polygon
/// the gap was cut from (config.other). Throws CornerHitError, InputError for a gamma that
/// does not start on l0 or stops advancing; BudgetExceeded is reported, not thrown.
ReflectionPlan plan_reflections(const GapConfiguration& config, const Polygon& obstacle, const EscapePath& gamma,
                                int budget = 16);

/// Independent re-check of the termination certificate.
bool verify_certificate(const ReflectionPlan& plan, const Polygon& obstacle);

nlohmann::json plan_to_json(const ReflectionPlan& plan);
nlohmann::json gap_to_json(const GapConfiguration& config);

struct PlaneWaveVerdict {
    bool consistent = false;
    std::vector<double> residuals;       // per edge: -(nu . d + lambda / k), nu outward
    std::array<Vec2, 3> witness{};       // three distinct outward normals
    double witness_cross = 0.0;          // (nu2 - nu1) x (nu3 - nu1)
};

/// Checks whether the incident plane wave alone can satisfy the impedance condition on
/// every edge of the polygon.
PlaneWaveVerdict plane_wave_impossibility(const Polygon& poly, const WaveParams& wave);

}  // namespace impref
