#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "impref/geometry.hpp"
#include "impref/kernels.hpp"

namespace impref {

struct Panel {
    Vec2 a, b;
    Vec2 mid;
    Vec2 normal;  // outward
    double length = 0.0;
    std::size_t edge = 0;  // polygon side carrying the panel
};

struct MeshParams {
    int panels_per_edge = 16;
    double grading = 3.0;  // panel ends cluster like s^grading toward each vertex
    int jobs = 1;          // assembly threads
    bool allow_complex_lambda = false;  // diagnostics only
};

/// Graded partition of the polygon boundary, counterclockwise.
struct BoundaryMesh {
    std::vector<Panel> panels;
    double grading = 3.0;

    static BoundaryMesh build(const Polygon& poly, const MeshParams& params);
    std::size_t size() const { return panels.size(); }
    double max_length() const;
};

enum class SolveKind { Impedance, SoundSoft };

struct ScatteringSolution {
    BoundaryMesh mesh;
    Polygon poly;
    WaveParams wave;
    SolveKind kind = SolveKind::Impedance;
    // Impedance: the trace u per panel. SoundSoft: the normal derivative of u per panel.
    std::vector<cplx> density;
    double residual = 0.0;  // relative residual of the collocation system
    double rcond = 0.0;     // reciprocal condition estimate of the system matrix
    bool ill_conditioned = false;  // rcond below 1e-6, possibly near an interior resonance
};

/// Collocation solve of (1/2) u - K u - i lambda S u = u_in on the boundary, K and S the
/// double and single layer of (i/4) H0(k|x - y|), piecewise constant u, midpoint collocation.
/// Throws ConvergenceError for a numerically singular system (rcond < 1e-14).
ScatteringSolution assemble_solve(const Polygon& poly, const WaveParams& wave, const MeshParams& params = {});

/// Sound-soft comparison solve: S psi = u_in with psi the normal derivative of the total field.
ScatteringSolution assemble_solve_dirichlet(const Polygon& poly, const WaveParams& wave,
                                            const MeshParams& params = {});

/// Total field at x outside the polygon. Throws InputError for x in the closed polygon.
cplx evaluate_field(const ScatteringSolution& sol, Vec2 x);

struct FarFieldPattern {
    std::vector<double> angles;  // uniform on [0, 2 pi)
    std::vector<cplx> values;
};

/// u_inf(xhat) with u_sc(r xhat) = e^{ikr} / sqrt(r) (u_inf(xhat) + O(1/r)). M >= 64.
FarFieldPattern far_field(const ScatteringSolution& sol, int M);
cplx far_field_at(const ScatteringSolution& sol, Vec2 xhat);

/// Impedance disk of the given radius centred at the origin, by its Bessel series.
/// truncation >= k radius + 20; throws ConvergenceError if the last retained terms exceed 1e-12.
FarFieldPattern mie_disk_oracle(double radius, const WaveParams& wave, int M, int truncation);

/// Scattering coefficient of mode n: -(k Jn' + i lambda Jn) / (k Hn' + i lambda Hn) at k radius.
cplx mie_coefficient(int n, double radius, const WaveParams& wave);

/// Regular N-gon with the area of the disk of the given radius, one vertex on the positive x axis.
Polygon equal_area_polygon(double radius, int N);

/// L2(S^1) norm of a - b on the common uniform grid, and the same relative to b.
double l2_difference(const FarFieldPattern& a, const FarFieldPattern& b);
double relative_l2_error(const FarFieldPattern& a, const FarFieldPattern& reference);

struct UniquenessReport {
    enum Verdict { Pass, Fail, Inconclusive } verdict = Inconclusive;
    bool identical_inputs = false;
    double farfield_gap = 0.0;         // on the finer meshes
    double mesh_error_estimate = 0.0;  // sum of both per-obstacle estimates
    double estimate1 = 0.0, estimate2 = 0.0;
    int panels1 = 0, panels2 = 0;      // finer mesh sizes
};

struct UniquenessCriteria {
    double identical_factor = 3.0;
    double distinct_factor = 10.0;
};

/// Far fields of both obstacles at panels_per_edge n and 2n; each error estimate is the
/// difference between the two levels. Identical inputs (same vertex cycle and lambda) pass
/// when gap <= identical_factor * estimate, distinct inputs when gap >= distinct_factor *
/// estimate; anything between is Inconclusive.
UniquenessReport uniqueness_experiment(const Polygon& d1, const WaveParams& wave1, const Polygon& d2,
                                       const WaveParams& wave2, int M, const MeshParams& params = {},
                                       const UniquenessCriteria& criteria = {});
UniquenessReport uniqueness_experiment(const Polygon& d1, const Polygon& d2, const WaveParams& wave, int M,
                                       const MeshParams& params = {}, const UniquenessCriteria& criteria = {});

/// CSV rows: angle,re,im,abs, preceded by '#' metadata lines.
void write_far_field_csv(std::ostream& os, const FarFieldPattern& ff, const std::vector<std::string>& header = {});

}  // namespace impref
