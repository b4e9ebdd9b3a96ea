#include "impref/forward_scattering.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "impref/quadrature.hpp"

namespace impref {

namespace {

constexpr double near_ratio = 1.5;
constexpr double far_ratio = 4.0;

double graded(double s, double p) {
    const double a = std::pow(s, p), b = std::pow(1.0 - s, p);
    return a / (a + b);
}

// Phi(x, y) + (1/2pi) log|x - y|, bounded as y -> x.
cplx phi_smooth(double r, double k) {
    if (r < 1e-12) return 0.25 * I - (std::log(0.5 * k) + euler_gamma) / (2.0 * pi);
    cplx h0, h1;
    hankel01(k * r, h0, h1);
    return 0.25 * I * h0 + std::log(r) / (2.0 * pi);
}

// d/dnu_y Phi(x, y) + i lambda Phi(x, y).
cplx robin_kernel(Vec2 x, Vec2 y, Vec2 nu, double k, cplx lambda) {
    const GreensEval g = phi_helmholtz(x, y, k);
    return -(g.grad.x * nu.x + g.grad.y * nu.y) + I * lambda * g.value;
}

cplx single_kernel(Vec2 x, Vec2 y, double k) { return phi_helmholtz(x, y, k).value; }

double distance_to_panel(const Panel& p, Vec2 x) { return Segment(p.a, p.b).distance_to(x); }

// Integral over the panel of f(y) ds for an x-dependent kernel f that is smooth on the panel.
template <class F>
cplx panel_integral(const Panel& p, Vec2 x, F&& f) {
    const Vec2 d = p.b - p.a;
    auto g = [&](double t) { return f(p.a + d * t); };
    const double rho = distance_to_panel(p, x) / p.length;
    if (rho >= far_ratio) return quad::fixed(g, 0.0, 1.0, 6) * p.length;
    if (rho >= near_ratio) return quad::fixed(g, 0.0, 1.0, 12) * p.length;
    const double t_star = std::clamp(dot(x - p.a, d) / (p.length * p.length), 0.0, 1.0);
    const double delta = std::max(dist(x, p.a + d * t_star) / p.length, 1e-3);
    return quad::graded(g, 0.0, 1.0, t_star, delta, 16) * p.length;
}

// Self-panel single layer at its own midpoint: analytic log part plus Gauss on the remainder.
cplx self_single(const Panel& p, double k) {
    const double h = p.length;
    const cplx log_part = -h * (std::log(0.5 * h) - 1.0) / (2.0 * pi);
    auto g = [&](double s) { return phi_smooth(std::abs(s), k); };
    const cplx rem = quad::fixed(g, -0.5 * h, 0.0, 8) + quad::fixed(g, 0.0, 0.5 * h, 8);
    return log_part + rem;
}

// Equal vertex cycles within 1e-9 relative, any starting vertex.
bool same_polygon(const Polygon& a, const Polygon& b) {
    if (a.size() != b.size()) return false;
    const double tol = 1e-9 * std::max({1.0, a.diameter(), b.diameter()});
    for (std::size_t s = 0; s < b.size(); ++s) {
        bool all = true;
        for (std::size_t i = 0; i < a.size() && all; ++i) all = dist(a.vertex(i), b.vertex(i + s)) <= tol;
        if (all) return true;
    }
    return false;
}

template <class RowFn>
void parallel_rows(std::size_t n, int jobs, RowFn&& row) {
    const int t = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
    if (t == 1) {
        for (std::size_t i = 0; i < n; ++i) row(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < t; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = static_cast<std::size_t>(w); i < n; i += static_cast<std::size_t>(t)) row(i);
        });
    for (auto& th : pool) th.join();
}

void check_wave(const WaveParams& wave, const MeshParams& params) {
    if (params.allow_complex_lambda) {
        wave.validate();
        if (!(wave.k > 0.0)) throw InputError("wave: scattering requires k > 0");
    } else {
        wave.validate_scattering();
    }
    if (params.panels_per_edge < 1) throw InputError("mesh: panels_per_edge must be positive");
    if (!(params.grading >= 1.0)) throw InputError("mesh: grading must be at least 1");
}

ScatteringSolution finish_solve(ScatteringSolution sol, const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    sol.rcond = lu.rcond();
    if (!(sol.rcond > 1e-14))
        throw ConvergenceError("assemble_solve: numerically singular system (rcond " + std::to_string(sol.rcond) + ")");
    sol.ill_conditioned = sol.rcond < 1e-6;
    const Eigen::VectorXcd u = lu.solve(b);
    sol.residual = (A * u - b).norm() / b.norm();
    sol.density.assign(u.data(), u.data() + u.size());
    return sol;
}

}  // namespace

BoundaryMesh BoundaryMesh::build(const Polygon& poly, const MeshParams& params) {
    if (params.panels_per_edge < 1) throw InputError("mesh: panels_per_edge must be positive");
    if (!(params.grading >= 1.0)) throw InputError("mesh: grading must be at least 1");
    BoundaryMesh m;
    m.grading = params.grading;
    const int n = params.panels_per_edge;
    for (std::size_t e = 0; e < poly.size(); ++e) {
        const Segment side = poly.edge(e);
        const Vec2 nu = poly.normal(e);
        for (int j = 0; j < n; ++j) {
            Panel p;
            p.a = side.point(graded(double(j) / n, params.grading));
            p.b = side.point(graded(double(j + 1) / n, params.grading));
            p.mid = (p.a + p.b) * 0.5;
            p.normal = nu;
            p.length = dist(p.a, p.b);
            p.edge = e;
            m.panels.push_back(p);
        }
    }
    return m;
}

double BoundaryMesh::max_length() const {
    double h = 0.0;
    for (const Panel& p : panels) h = std::max(h, p.length);
    return h;
}

ScatteringSolution assemble_solve(const Polygon& poly, const WaveParams& wave, const MeshParams& params) {
    check_wave(wave, params);
    ScatteringSolution sol{BoundaryMesh::build(poly, params), poly, wave, SolveKind::Impedance, {}, 0.0, 0.0, false};
    const auto& P = sol.mesh.panels;
    const std::size_t n = P.size();
    const double k = wave.k;
    const cplx lam = wave.lambda;
    Eigen::MatrixXcd A(n, n);
    Eigen::VectorXcd b(n);
    parallel_rows(n, params.jobs, [&](std::size_t i) {
        const Vec2 x = P[i].mid;
        b(i) = std::exp(I * k * dot(wave.d, x));
        for (std::size_t j = 0; j < n; ++j) {
            // the double layer vanishes on the collocation point's own flat panel
            const cplx kij = i == j ? I * lam * self_single(P[j], k)
                                    : panel_integral(P[j], x, [&](Vec2 y) { return robin_kernel(x, y, P[j].normal, k, lam); });
            A(i, j) = (i == j ? 0.5 : 0.0) - kij;
        }
    });
    return finish_solve(std::move(sol), A, b);
}

ScatteringSolution assemble_solve_dirichlet(const Polygon& poly, const WaveParams& wave, const MeshParams& params) {
    check_wave(wave, params);
    ScatteringSolution sol{BoundaryMesh::build(poly, params), poly, wave, SolveKind::SoundSoft, {}, 0.0, 0.0, false};
    const auto& P = sol.mesh.panels;
    const std::size_t n = P.size();
    const double k = wave.k;
    Eigen::MatrixXcd A(n, n);
    Eigen::VectorXcd b(n);
    parallel_rows(n, params.jobs, [&](std::size_t i) {
        const Vec2 x = P[i].mid;
        b(i) = std::exp(I * k * dot(wave.d, x));
        for (std::size_t j = 0; j < n; ++j)
            A(i, j) = i == j ? self_single(P[j], k)
                             : panel_integral(P[j], x, [&](Vec2 y) { return single_kernel(x, y, k); });
    });
    return finish_solve(std::move(sol), A, b);
}

cplx evaluate_field(const ScatteringSolution& sol, Vec2 x) {
    if (polygon_contains(sol.poly, x, 1e-12 * std::max(1.0, sol.poly.diameter())) != Containment::Outside)
        throw InputError("evaluate_field: point lies in the closed obstacle");
    const double k = sol.wave.k;
    const cplx lam = sol.wave.lambda;
    cplx u = std::exp(I * k * dot(sol.wave.d, x));
    for (std::size_t j = 0; j < sol.mesh.size(); ++j) {
        const Panel& p = sol.mesh.panels[j];
        if (sol.kind == SolveKind::Impedance)
            u += sol.density[j] * panel_integral(p, x, [&](Vec2 y) { return robin_kernel(x, y, p.normal, k, lam); });
        else
            u -= sol.density[j] * panel_integral(p, x, [&](Vec2 y) { return single_kernel(x, y, k); });
    }
    return u;
}

cplx far_field_at(const ScatteringSolution& sol, Vec2 xhat) {
    const double k = sol.wave.k;
    const cplx lam = sol.wave.lambda;
    const cplx c = std::exp(0.25 * I * pi) / std::sqrt(8.0 * pi * k);
    cplx sum = 0.0;
    for (std::size_t j = 0; j < sol.mesh.size(); ++j) {
        const Panel& p = sol.mesh.panels[j];
        const Vec2 d = p.b - p.a;
        auto plane = [&](double t) { return std::exp(-I * k * dot(xhat, p.a + d * t)); };
        const cplx e = quad::fixed(plane, 0.0, 1.0, 6) * p.length;
        if (sol.kind == SolveKind::Impedance)
            sum += sol.density[j] * (-I * k * dot(xhat, p.normal) + I * lam) * e;
        else
            sum -= sol.density[j] * e;
    }
    return c * sum;
}

FarFieldPattern far_field(const ScatteringSolution& sol, int M) {
    if (M < 64) throw InputError("far_field: at least 64 directions required");
    FarFieldPattern ff;
    for (int m = 0; m < M; ++m) {
        const double th = 2.0 * pi * m / M;
        ff.angles.push_back(th);
        ff.values.push_back(far_field_at(sol, {std::cos(th), std::sin(th)}));
    }
    return ff;
}

cplx mie_coefficient(int n, double radius, const WaveParams& wave) {
    const BesselHankel b = bessel_hankel(n, wave.k * radius);
    const double k = wave.k;
    return -(k * b.Jp + I * wave.lambda * b.J) / (k * b.Hp + I * wave.lambda * b.H);
}

FarFieldPattern mie_disk_oracle(double radius, const WaveParams& wave, int M, int truncation) {
    wave.validate_scattering();
    if (!(radius > 0.0)) throw InputError("mie_disk_oracle: radius must be positive");
    if (M < 1) throw InputError("mie_disk_oracle: M must be positive");
    if (truncation < wave.k * radius + 20.0) throw InputError("mie_disk_oracle: truncation below k radius + 20");
    std::vector<cplx> A(static_cast<std::size_t>(truncation) + 1);
    for (int n = 0; n <= truncation; ++n) A[static_cast<std::size_t>(n)] = mie_coefficient(n, radius, wave);
    const double tail = std::max(std::abs(A[A.size() - 1]), std::abs(A[A.size() - 2]));
    if (tail > 1e-12) throw ConvergenceError("mie_disk_oracle: series tail above 1e-12; raise the truncation");
    const double thd = std::atan2(wave.d.y, wave.d.x);
    const cplx c = std::sqrt(2.0 / (pi * wave.k)) * std::exp(-0.25 * I * pi);
    FarFieldPattern ff;
    for (int m = 0; m < M; ++m) {
        const double th = 2.0 * pi * m / M;
        // A_{-n} = A_n for integer orders
        cplx s = A[0];
        for (int n = truncation; n >= 1; --n) s += 2.0 * A[static_cast<std::size_t>(n)] * std::cos(n * (th - thd));
        ff.angles.push_back(th);
        ff.values.push_back(c * s);
    }
    return ff;
}

Polygon equal_area_polygon(double radius, int N) {
    if (N < 3 || !(radius > 0.0)) throw InputError("equal_area_polygon: N >= 3 and positive radius required");
    const double R = radius * std::sqrt(2.0 * pi / (N * std::sin(2.0 * pi / N)));
    std::vector<Vec2> v;
    for (int j = 0; j < N; ++j) v.push_back({R * std::cos(2.0 * pi * j / N), R * std::sin(2.0 * pi * j / N)});
    return Polygon(v);
}

double l2_difference(const FarFieldPattern& a, const FarFieldPattern& b) {
    if (a.values.size() != b.values.size() || a.values.empty())
        throw InputError("l2_difference: patterns must share the angular grid");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
    return std::sqrt(s * 2.0 * pi / double(a.values.size()));
}

double relative_l2_error(const FarFieldPattern& a, const FarFieldPattern& reference) {
    FarFieldPattern zero{reference.angles, std::vector<cplx>(reference.values.size())};
    return l2_difference(a, reference) / l2_difference(reference, zero);
}

UniquenessReport uniqueness_experiment(const Polygon& d1, const WaveParams& wave1, const Polygon& d2,
                                       const WaveParams& wave2, int M, const MeshParams& params,
                                       const UniquenessCriteria& criteria) {
    if (wave1.k != wave2.k || !(wave1.d == wave2.d))
        throw InputError("uniqueness_experiment: both solves need the same k and d");
    UniquenessReport rep;
    rep.identical_inputs = same_polygon(d1, d2) && wave1.lambda == wave2.lambda;
    MeshParams fine = params;
    fine.panels_per_edge = 2 * params.panels_per_edge;
    auto run = [&](const Polygon& p, const WaveParams& w, double& est, int& panels) {
        const FarFieldPattern coarse = far_field(assemble_solve(p, w, params), M);
        const ScatteringSolution s = assemble_solve(p, w, fine);
        const FarFieldPattern f = far_field(s, M);
        est = l2_difference(f, coarse);
        panels = static_cast<int>(s.mesh.size());
        return f;
    };
    const FarFieldPattern f1 = run(d1, wave1, rep.estimate1, rep.panels1);
    const FarFieldPattern f2 = run(d2, wave2, rep.estimate2, rep.panels2);
    rep.farfield_gap = l2_difference(f1, f2);
    rep.mesh_error_estimate = rep.estimate1 + rep.estimate2;
    const bool close = rep.farfield_gap <= criteria.identical_factor * rep.mesh_error_estimate;
    const bool apart = rep.farfield_gap >= criteria.distinct_factor * rep.mesh_error_estimate;
    if (!close && !apart)
        rep.verdict = UniquenessReport::Inconclusive;
    else
        rep.verdict = (rep.identical_inputs ? close : apart) ? UniquenessReport::Pass : UniquenessReport::Fail;
    return rep;
}

UniquenessReport uniqueness_experiment(const Polygon& d1, const Polygon& d2, const WaveParams& wave, int M,
                                       const MeshParams& params, const UniquenessCriteria& criteria) {
    return uniqueness_experiment(d1, wave, d2, wave, M, params, criteria);
}

void write_far_field_csv(std::ostream& os, const FarFieldPattern& ff, const std::vector<std::string>& header) {
    for (const std::string& h : header) os << "# " << h << '\n';
    os << "angle,re,im,abs\n";
    char buf[128];
    for (std::size_t i = 0; i < ff.values.size(); ++i) {
        const cplx v = ff.values[i];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", ff.angles[i], v.real(), v.imag(), std::abs(v));
        os << buf;
    }
}

}  // namespace impref
