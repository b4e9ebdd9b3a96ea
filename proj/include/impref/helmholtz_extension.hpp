#pragma once

#include <optional>

#include "impref/area_quadrature.hpp"
#include "impref/harmonic_reflection.hpp"
#include "impref/kernels.hpp"

namespace impref {

/// Omega+ abutting the line from the side of line.normal(), and the sub-polygon K that
/// carries the two area integrals (Omega+ when absent).
struct ExtensionRegion {
    Line line;
    Polygon omega_plus;
    std::optional<Polygon> K;
    AreaQuadSpec quad;

    const Polygon& k_region() const { return K ? *K : omega_plus; }
};

struct DkOptions {
    DtildeOptions dtilde;
    bool check_region = true;  // K inside Omega+, path and vertical drop inside K
};

/// Parts of the extension value; value = dtilde - k^2 area_dtilde_g0 + k^2 area_g0.
struct DkResult {
    cplx value{};
    cplx dtilde{};
    cplx area_dtilde_g0{};
    cplx area_g0{};
    std::size_t nodes = 0;
};

/// Path form of the harmonic operator applied in x to G0(.; y), line frame coordinates.
/// The 1D integrals are split at the nearest approach of y to each leg.
cplx dtilde_x_g0(Vec2 x, Vec2 y, const std::vector<Vec2>& path, cplx lambda);

/// Value at x in Omega+ interpreted as u(R x), R the reflection in region.line:
///   (D~u)(x) - k^2 int_K D~x G0(x; y) u(y) dy + k^2 int_K G0(R x; y) u(y) dy,
/// with Robin lambda = wave.lambda on the line. K must contain the path and the segment
/// dropped from x perpendicular to the line. lambda = 0 returns u(x) without quadrature.
DkResult dk_apply_detailed(const FieldOracle& u, const ExtensionRegion& region, const PathCurve& path,
                           const WaveParams& wave, Vec2 x, const DkOptions& opt = {});
cplx dk_apply(const FieldOracle& u, const ExtensionRegion& region, const PathCurve& path, const WaveParams& wave,
              Vec2 x, const DkOptions& opt = {});

/// dk_apply along the perpendicular drop, where D~x G0(x; y) = G0(R x; y) and both area
/// integrals cancel: a single 1D integral of u along the drop.
cplx dk_apply_vertical(const FieldOracle& u, const RobinLineBC& bc, Vec2 x, const DtildeOptions& opt = {});

/// Sector Sigma_0 with a condition on each bounding half-line. The Robin condition on L_j
/// reads d/dnu u + i eta_j u = 0 with nu pointing into Sigma_j (into Sigma_0 on L0, away
/// from it on L1).
struct SectorProblem {
    Sector sector;
    BoundaryCondition bc0;
    BoundaryCondition bc1;
    FieldOracle field;  // valid on a neighbourhood of the closed sector Sigma_0
};

struct SectorOptions {
    int max_reflections = 16;
    long max_evaluations = 4000000;  // field evaluations across the whole recursion
    int points = 24;                 // Gauss points per perpendicular integral
    double monitor_tol = 1e-8;       // top-level agreement between points and points + 8
    bool check_boundary = true;      // precondition: boundary residual on both half-lines
    double boundary_tol = 1e-6;
};

struct SectorResult {
    cplx value{};
    int reflections = 0;    // sectors crossed from Sigma_0 to x
    long evaluations = 0;   // field evaluations used
};

/// Analytic continuation of the sector field to x by composing one-line extensions across
/// the half-lines L_j (bc0 on even j, bc1 on odd j, with the impedance sign fixed by the
/// normal orientation). Dirichlet and Neumann lines reflect by -1 and +1.
/// Throws RangeError when x needs more than max_reflections, ConvergenceError when the
/// evaluation budget is spent or the residual monitor trips, InputError when the field
/// violates the boundary conditions.
SectorResult sector_extend(const SectorProblem& prob, Vec2 x, const SectorOptions& opt = {});

struct GapExtension {
    cplx value{};
    Vec2 path_start;          // foot of the integration path on l
    double interface_check;   // |v - u o R| at a point beside l, computed internally
};

/// v = D u at x in the reflected gap R_L(gap) or beside l on the far side, with L the line
/// of l and lambda = wave.lambda on l. The gap polygon must lie on one side of L.
GapExtension gap_extend(const FieldOracle& u, const Polygon& gap, const Segment& l, const WaveParams& wave,
                             Vec2 x, const DkOptions& opt = {});

}  // namespace impref
