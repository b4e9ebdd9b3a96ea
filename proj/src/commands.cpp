#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <mutex>
#include <random>
#include <thread>

#include "impref/forward_scattering.hpp"
#include "impref/geometry_io.hpp"
#include "impref/harmonic_reflection.hpp"
#include "impref/helmholtz_extension.hpp"
#include "impref/path_planner.hpp"
#include "impref/scenario.hpp"

namespace impref {

namespace {

using nlohmann::json;

struct Suite {
    std::string name;
    double worst = 0.0;
    double tolerance = 0.0;
    std::size_t samples = 0;
    bool passed() const { return worst <= tolerance; }
};

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& file, const Scenario& s, const std::vector<std::string>& extra,
              const std::string& columns)
        : os_(file) {
        if (!os_) throw InputError("cannot write " + file.string());
        os_ << "# command=" << s.command << "\n# seed=" << s.seed << '\n';
        if (s.config.contains("tolerances")) os_ << "# tolerances=" << s.config.at("tolerances").dump() << '\n';
        for (const std::string& e : extra) os_ << "# " << e << '\n';
        os_ << columns << '\n';
    }

    void row(const std::vector<double>& v) {
        char buf[40];
        for (std::size_t i = 0; i < v.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", v[i]);
            os_ << (i ? "," : "") << buf;
        }
        os_ << '\n';
    }

private:
    std::ofstream os_;
};

// Each index is written by exactly one worker, so results do not depend on jobs.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& f) {
    const int t = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
    if (t == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first;
    std::mutex m;
    for (int w = 0; w < t; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = static_cast<std::size_t>(w); i < n; i += static_cast<std::size_t>(t)) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(m);
                if (!first) first = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (first) std::rethrow_exception(first);
}

std::vector<Vec2> grid_points(const json& g) {
    const int n = g.at("n").get<int>();
    const double a = g.at("x1")[0], b = g.at("x1")[1], c = g.at("x2")[0], d = g.at("x2")[1];
    std::vector<Vec2> pts;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) pts.push_back({a + (i + 0.5) * (b - a) / n, c + (j + 0.5) * (d - c) / n});
    return pts;
}

WaveParams wave_from(const json& w) {
    WaveParams p;
    p.k = w.at("k").get<double>();
    p.lambda = complex_from_json(w.at("lambda"));
    p.d = {w.at("d")[0].get<double>(), w.at("d")[1].get<double>()};
    return p;
}

double tol(const Scenario& s, const char* name) { return s.config.at("tolerances").at(name).get<double>(); }

int jobs(const Scenario& s) { return s.config.at("jobs").get<int>(); }

// a e^{-lambda z} + b e^{lambda conj(z)}: harmonic and Robin-compatible on x2 = 0.
FieldOracle exact_family(double lambda, cplx a, cplx b) {
    return FieldOracle::with_gradient([=](Vec2 p) {
        const cplx z{p.x, p.y};
        const cplx e1 = a * std::exp(-lambda * z), e2 = b * std::exp(lambda * std::conj(z));
        return FieldSample{e1 + e2, {lambda * (e2 - e1), -I * lambda * (e1 + e2)}};
    });
}

FieldOracle plane_wave(double k, Vec2 d) {
    return FieldOracle::with_gradient([=](Vec2 p) {
        const cplx v = std::exp(I * k * dot(d, p));
        return FieldSample{v, {I * k * d.x * v, I * k * d.y * v}};
    });
}

// NaN counts as an unbounded error.
double worse(double worst, double e) { return std::isnan(e) ? HUGE_VAL : std::max(worst, e); }

json suite_json(const Suite& s) {
    return {{"name", s.name}, {"passed", s.passed()}, {"worst", s.worst}, {"tolerance", s.tolerance}, {"samples", s.samples}};
}

CommandReport finish_suites(const std::vector<Suite>& suites, std::ostream& log, const std::string& command) {
    CommandReport r;
    r.summary["suites"] = json::array();
    for (const Suite& s : suites) {
        r.summary["suites"].push_back(suite_json(s));
        char buf[200];
        std::snprintf(buf, sizeof buf, "[%s] %-18s %s  worst=%.3e  tol=%.3e  n=%zu\n", command.c_str(), s.name.c_str(),
                      s.passed() ? "PASS" : "FAIL", s.worst, s.tolerance, s.samples);
        log << buf;
        if (!s.passed() && r.failing.empty()) {
            r.failing = s.name;
            r.exit_code = ExitInvariantFailure;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------------------

CommandReport verify_harmonic(const Scenario& s, std::ostream& log) {
    const json& c = s.config;
    DtildeOptions opt;
    opt.negate_kernel_phase = c.at("flip_kernel_sign").get<bool>();
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<Vec2> grid = grid_points(c.at("grid"));

    Suite exact{"exactness", 0.0, tol(s, "exactness"), 0};
    Suite paths{"path_independence", 0.0, tol(s, "path_independence"), 0};
    CsvWriter ex(s.out / "exactness.csv", s, {"field=exp(-lambda*(x1+i*x2)), reference w(x1,-x2)"},
                 "lambda,x1,x2,re,im,ref_re,ref_im,abs_err");
    CsvWriter pi_csv(s.out / "path_independence.csv", s, {"second path: seeded detour from (x1+a,0) via (x1+a,x2+b)"},
                     "lambda,x1,x2,re_l_path,im_l_path,re_detour,im_detour,abs_diff");
    for (const auto& lj : c.at("lambdas")) {
        const double lam = lj.get<double>();
        const RobinLineBC bc = RobinLineBC::constant(lam);
        const FieldOracle w = exact_family(lam, 1.0, 0.0);
        std::vector<std::array<double, 2>> detour(grid.size());
        for (auto& d : detour) d = {-0.8 + 1.6 * unit(rng), 0.5 * unit(rng)};
        std::vector<cplx> v1(grid.size()), v2(grid.size());
        parallel_for(grid.size(), jobs(s), [&](std::size_t i) {
            const Vec2 x = grid[i];
            v1[i] = dtilde_apply(w, PathCurve({{x.x - 0.5, 0.0}, {x.x - 0.5, x.y}, x}), bc, x, opt);
            const double a = detour[i][0], b = detour[i][1];
            v2[i] = dtilde_apply(w, PathCurve({{x.x + a, 0.0}, {x.x + a, x.y + b}, x}), bc, x, opt);
        });
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const Vec2 x = grid[i];
            const cplx ref = w.value({x.x, -x.y});
            const double e = std::abs(v1[i] - ref), p = std::abs(v1[i] - v2[i]);
            exact.worst = worse(exact.worst, e);
            paths.worst = worse(paths.worst, p);
            ex.row({lam, x.x, x.y, v1[i].real(), v1[i].imag(), ref.real(), ref.imag(), e});
            pi_csv.row({lam, x.x, x.y, v1[i].real(), v1[i].imag(), v2[i].real(), v2[i].imag(), p});
        }
        exact.samples += grid.size();
        paths.samples += grid.size();
    }

    Suite kernel{"kernel", 0.0, tol(s, "kernel"), 0};
    {
        CsvWriter kc(s.out / "kernel.csv", s, {"reference -4 exp(-i lambda (y2+xt2)) sinh(lambda (y1-xt1))"},
                     "lambda,y1,y2,xt1,xt2,re,im,abs_err");
        const auto& lams = c.at("lambdas");
        const int n = c.at("random_points").get<int>();
        for (int i = 0; i < n; ++i) {
            const double lam = lams[static_cast<std::size_t>(i) % lams.size()].get<double>();
            const Vec2 y{-1.5 + 3 * unit(rng), -1.5 + 3 * unit(rng)}, xt{-1.5 + 3 * unit(rng), -1.5 + 3 * unit(rng)};
            const RobinLineBC bc = RobinLineBC::holomorphic([lam](cplx) { return cplx(lam); });
            const cplx v = v_kernel_general(y, xt, bc).value;
            const cplx ref = -4.0 * std::exp(-I * lam * (y.y + xt.y)) * std::sinh(lam * (y.x - xt.x));
            const double e = std::abs(v - ref);
            kernel.worst = worse(kernel.worst, e);
            kc.row({lam, y.x, y.y, xt.x, xt.y, v.real(), v.imag(), e});
        }
        kernel.samples = static_cast<std::size_t>(n);
    }

    Suite harm{"harmonicity", 0.0, tol(s, "harmonicity"), 0};
    Suite cval{"cauchy_value", 0.0, tol(s, "cauchy_value"), 0};
    Suite cnorm{"cauchy_normal", 0.0, tol(s, "cauchy_normal"), 0};
    {
        CsvWriter hc(s.out / "harmonicity.csv", s, {"five-point Laplacian of the extension, h=1e-3, relative to max(1,lambda^2)|w|"},
                     "lambda,x1,x2,rel_laplacian");
        CsvWriter cc(s.out / "cauchy.csv", s,
                     {"value jump at x2=-+1e-9 relative to |w|; normal derivative from second-order one-sided differences,"
                      " step 5e-4, relative to max(1,lambda)|w|"},
                     "lambda,x1,value_jump,normal_jump");
        const json& g = c.at("grid");
        const double a = g.at("x1")[0], b = g.at("x1")[1], top = g.at("x2")[1];
        const int n = c.at("probe_points").get<int>();
        for (const auto& lj : c.at("lambdas")) {
            const double lam = lj.get<double>();
            const RobinLineBC bc = RobinLineBC::constant(lam);
            const FieldOracle w = exact_family(lam, 1.0, cplx(0.3, -0.2));
            auto ext = [&](Vec2 below) {
                const Vec2 x{below.x, -below.y};
                return dtilde_apply(w, PathCurve({{x.x, 0.0}, x}), bc, x, opt);
            };
            for (int i = 0; i < n; ++i) {
                const Vec2 p{a + (b - a) * unit(rng), -(0.2 + (top - 0.4) * unit(rng))};
                const double h = 1e-3;
                const cplx lap = (ext(p + Vec2{h, 0}) + ext(p - Vec2{h, 0}) + ext(p + Vec2{0, h}) + ext(p - Vec2{0, h}) - 4.0 * ext(p)) / (h * h);
                const double rel_lap = std::abs(lap) / (std::max(1.0, lam * lam) * std::abs(w.value(p)));
                harm.worst = worse(harm.worst, rel_lap);
                hc.row({lam, p.x, p.y, rel_lap});

                const double x1 = a + (b - a) * unit(rng), e = 5e-4;
                const double scale = std::abs(w.value({x1, 0.0}));
                const double jump = std::abs(ext({x1, -1e-9}) - w.value({x1, 1e-9})) / scale;
                // d/dx2 at 0 from samples at e, 2e, 3e on one side
                auto one_sided = [&](auto f) { return (-2.5 * f(e) + 4.0 * f(2 * e) - 1.5 * f(3 * e)) / e; };
                const cplx d_above = one_sided([&](double t) { return w.value({x1, t}); });
                const cplx d_below = -one_sided([&](double t) { return ext({x1, -t}); });
                const double njump = std::abs(d_below - d_above) / (std::max(1.0, lam) * scale);
                cval.worst = worse(cval.worst, jump);
                cnorm.worst = worse(cnorm.worst, njump);
                cc.row({lam, x1, jump, njump});
            }
            harm.samples += static_cast<std::size_t>(n);
            cval.samples += static_cast<std::size_t>(n);
            cnorm.samples += static_cast<std::size_t>(n);
        }
    }
    return finish_suites({exact, paths, kernel, harm, cval, cnorm}, log, s.command);
}

// ---------------------------------------------------------------------------------------

Polygon box(Vec2 lo, Vec2 hi) { return Polygon({lo, {hi.x, lo.y}, hi, {lo.x, hi.y}}); }

CommandReport verify_helmholtz(const Scenario& s, std::ostream& log) {
    const json& c = s.config;
    const WaveParams wave = wave_from(c.at("wave"));
    if (wave.lambda.imag() != 0.0) throw InputError("verify-helmholtz: real lambda required");
    const double lam = wave.lambda.real();
    if (std::abs(wave.k * wave.d.y + lam) > 1e-12)
        throw InputError("verify-helmholtz: the plane wave needs d2 = -lambda/k to satisfy the Robin condition on x2 = 0");
    DkOptions opt;
    opt.dtilde.negate_kernel_phase = c.at("flip_kernel_sign").get<bool>();
    const FieldOracle u = plane_wave(wave.k, wave.d);
    const json& g = c.at("grid");
    const double x1lo = g.at("x1")[0], x1hi = g.at("x1")[1], x2hi = g.at("x2")[1];
    ExtensionRegion base{Line({0, 0}, {1, 0}), box({x1lo - 2.0, 0.0}, {x1hi + 2.0, x2hi + 1.0}), std::nullopt, {}};
    base.quad.order = c.at("area_quadrature").at("order").get<int>();
    base.quad.tube_depth = c.at("area_quadrature").at("tube_depth").get<int>();
    base.quad.tube_radius_factor = c.at("area_quadrature").at("tube_radius_factor").get<double>();
    auto with_k = [&](Polygon K) {
        ExtensionRegion r = base;
        r.K = std::move(K);
        return r;
    };
    auto l_path = [](Vec2 x) { return PathCurve({{x.x - 0.5, 0.0}, {x.x - 0.5, x.y}, x}); };
    auto small_k = [](Vec2 x) { return box({x.x - 0.8, 0.0}, {x.x + 0.3, x.y + 0.3}); };
    auto wide_k = [](Vec2 x) { return box({x.x - 1.0, 0.0}, {x.x + 1.0, x.y + 0.6}); };

    const std::vector<Vec2> grid = grid_points(g);
    Suite pw{"plane_wave", 0.0, tol(s, "plane_wave"), grid.size()};
    {
        std::vector<cplx> v(grid.size());
        parallel_for(grid.size(), jobs(s), [&](std::size_t i) { v[i] = dk_apply(u, with_k(small_k(grid[i])), l_path(grid[i]), wave, grid[i], opt); });
        CsvWriter csv(s.out / "plane_wave.csv", s, {"reference u(x1,-x2)"}, "x1,x2,re,im,ref_re,ref_im,abs_err");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const cplx ref = u.value({grid[i].x, -grid[i].y});
            const double e = std::abs(v[i] - ref);
            pw.worst = worse(pw.worst, e);
            csv.row({grid[i].x, grid[i].y, v[i].real(), v[i].imag(), ref.real(), ref.imag(), e});
        }
    }

    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int probes = c.at("probe_points").get<int>();
    Suite kinv{"k_invariance", 0.0, tol(s, "k_invariance"), static_cast<std::size_t>(probes)};
    Suite zero{"lambda_zero", 0.0, 0.0, static_cast<std::size_t>(probes)};
    {
        std::vector<Vec2> pts;
        for (int i = 0; i < probes; ++i) pts.push_back({x1lo + (x1hi - x1lo) * unit(rng), 0.1 + (x2hi - 0.2) * unit(rng)});
        std::vector<cplx> a(pts.size()), b(pts.size());
        parallel_for(pts.size(), jobs(s), [&](std::size_t i) {
            a[i] = dk_apply(u, with_k(small_k(pts[i])), l_path(pts[i]), wave, pts[i], opt);
            b[i] = dk_apply(u, with_k(wide_k(pts[i])), l_path(pts[i]), wave, pts[i], opt);
        });
        WaveParams w0 = wave;
        w0.lambda = 0.0;
        CsvWriter csv(s.out / "k_invariance.csv", s, {"K1 box [x1-0.8,x1+0.3]x[0,x2+0.3], K2 box [x1-1,x1+1]x[0,x2+0.6]"},
                      "x1,x2,abs_diff,lambda_zero_err");
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double d = std::abs(a[i] - b[i]);
            const double z = std::abs(dk_apply(u, with_k(small_k(pts[i])), l_path(pts[i]), w0, pts[i], opt) - u.value(pts[i]));
            kinv.worst = worse(kinv.worst, d);
            zero.worst = worse(zero.worst, z);
            csv.row({pts[i].x, pts[i].y, d, z});
        }
    }

    Suite sector{"sector", 0.0, tol(s, "sector"), 0};
    {
        CsvWriter csv(s.out / "sector.csv", s, {"apex (0.1,-0.2), L0 at angle 0.3, opening pi/m, points in the neighbouring sector"},
                      "m,x1,x2,re,im,ref_re,ref_im,abs_err");
        for (const auto& mj : c.at("sector_openings")) {
            const int m = mj.get<int>();
            const Sector sec({0.1, -0.2}, 0.3, pi / m);
            const SectorProblem p{sec, BoundaryCondition::robin(-wave.k * dot(wave.d, rot_ccw(sec.dir0()))),
                                  BoundaryCondition::robin(-wave.k * dot(wave.d, rot_ccw(sec.dir1()))), u};
            for (int i = 0; i < probes; ++i) {
                const double ang = sec.start + sec.opening * (1.05 + 0.9 * unit(rng));
                const Vec2 x = sec.apex + Vec2{std::cos(ang), std::sin(ang)} * (0.3 + 1.2 * unit(rng));
                const cplx v = sector_extend(p, x).value, ref = u.value(x);
                const double e = std::abs(v - ref);
                sector.worst = worse(sector.worst, e);
                csv.row({double(m), x.x, x.y, v.real(), v.imag(), ref.real(), ref.imag(), e});
            }
            sector.samples += static_cast<std::size_t>(probes);
        }
    }

    Suite tiling{"tiling", 0.0, tol(s, "tiling"), 0};
    {
        const double k = wave.k;
        const FieldOracle even = FieldOracle::with_gradient([k](Vec2 p) {
            const double c1 = std::cos(0.6 * k * p.x), c2 = std::cos(0.8 * k * p.y);
            return FieldSample{c1 * c2, {-0.6 * k * std::sin(0.6 * k * p.x) * c2, -0.8 * k * c1 * std::sin(0.8 * k * p.y)}};
        });
        const SectorProblem neu{Sector({0, 0}, 0.0, pi / 2), BoundaryCondition::neumann(), BoundaryCondition::neumann(), even};
        CsvWriter csv(s.out / "tiling.csv", s, {"Neumann quadrant, reference u(|x1|,|x2|)"}, "x1,x2,abs_err");
        for (int i = 0; i < probes; ++i) {
            const double ang = pi / 2 * (1.0 + 3.0 * unit(rng)), r = 0.2 + 1.5 * unit(rng);
            const Vec2 x{r * std::cos(ang), r * std::sin(ang)};
            const double e = std::abs(sector_extend(neu, x).value - even.value({std::abs(x.x), std::abs(x.y)}));
            tiling.worst = worse(tiling.worst, e);
            csv.row({x.x, x.y, e});
        }
        tiling.samples = static_cast<std::size_t>(probes);
    }
    return finish_suites({pw, kinv, zero, sector, tiling}, log, s.command);
}

// ---------------------------------------------------------------------------------------

MeshParams mesh_from(const Scenario& s) {
    MeshParams m;
    m.panels_per_edge = s.config.at("mesh").at("panels_per_edge").get<int>();
    m.grading = s.config.at("mesh").at("grading").get<double>();
    m.jobs = jobs(s);
    return m;
}

std::string wave_line(const WaveParams& w) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "k=%.17g lambda=%.17g d=(%.17g,%.17g)", w.k, w.lambda.real(), w.d.x, w.d.y);
    return buf;
}

CommandReport solve(const Scenario& s, std::ostream& log) {
    const WaveParams wave = wave_from(s.config.at("wave"));
    const MeshParams mesh = mesh_from(s);
    const bool soft = s.config.at("formulation") == "sound-soft";
    const ScatteringSolution sol = soft ? assemble_solve_dirichlet(s.geometry[0], wave, mesh) : assemble_solve(s.geometry[0], wave, mesh);
    const FarFieldPattern ff = far_field(sol, s.config.at("far_field_samples").get<int>());
    std::ofstream os(s.out / "far_field.csv");
    if (!os) throw InputError("cannot write far_field.csv");
    write_far_field_csv(os, ff,
                        {"command=solve", "seed=" + std::to_string(s.seed), wave_line(wave),
                         "formulation=" + s.config.at("formulation").get<std::string>(),
                         "panels=" + std::to_string(sol.mesh.size()),
                         "columns: angle of xhat in radians, far-field real part, imaginary part, modulus"});
    CommandReport r;
    r.summary["panels"] = sol.mesh.size();
    r.summary["rcond"] = sol.rcond;
    r.summary["residual"] = sol.residual;
    r.summary["ill_conditioned"] = sol.ill_conditioned;
    const double need = tol(s, "rcond");
    char buf[200];
    std::snprintf(buf, sizeof buf, "[solve] panels=%zu rcond=%.3e residual=%.3e %s\n", sol.mesh.size(), sol.rcond, sol.residual,
                  sol.rcond >= need ? "PASS" : "FAIL (rcond below tolerance: near an interior resonance?)");
    log << buf;
    if (sol.rcond < need) {
        r.exit_code = ExitInvariantFailure;
        r.failing = "rcond";
    }
    return r;
}

CommandReport compare(const Scenario& s, std::ostream& log) {
    const WaveParams w1 = wave_from(s.config.at("wave"));
    WaveParams w2 = w1;
    if (!s.config.at("lambda2").is_null()) w2.lambda = complex_from_json(s.config.at("lambda2"));
    UniquenessCriteria crit;
    crit.identical_factor = s.config.at("criteria").at("identical_factor").get<double>();
    crit.distinct_factor = s.config.at("criteria").at("distinct_factor").get<double>();
    const UniquenessReport u = uniqueness_experiment(s.geometry[0], w1, s.geometry[1], w2,
                                                     s.config.at("far_field_samples").get<int>(), mesh_from(s), crit);
    static const char* names[] = {"Pass", "Fail", "Inconclusive"};
    CommandReport r;
    r.summary = {{"verdict", names[u.verdict]},      {"identical_inputs", u.identical_inputs},
                 {"farfield_gap", u.farfield_gap},   {"mesh_error_estimate", u.mesh_error_estimate},
                 {"estimate1", u.estimate1},         {"estimate2", u.estimate2},
                 {"panels1", u.panels1},             {"panels2", u.panels2}};
    CsvWriter csv(s.out / "compare.csv", s,
                  {"identical_factor=" + std::to_string(crit.identical_factor), "distinct_factor=" + std::to_string(crit.distinct_factor),
                   "identical_inputs=" + std::string(u.identical_inputs ? "1" : "0")},
                  "farfield_gap,mesh_error_estimate,estimate1,estimate2,panels1,panels2,ratio");
    const double ratio = u.farfield_gap / u.mesh_error_estimate;
    csv.row({u.farfield_gap, u.mesh_error_estimate, u.estimate1, u.estimate2, double(u.panels1), double(u.panels2), ratio});
    char buf[240];
    std::snprintf(buf, sizeof buf, "[compare] %s inputs: gap=%.3e estimate=%.3e ratio=%.2f  %s\n",
                  u.identical_inputs ? "identical" : "distinct", u.farfield_gap, u.mesh_error_estimate, ratio, names[u.verdict]);
    log << buf;
    if (u.verdict == UniquenessReport::Fail) {
        r.exit_code = ExitInvariantFailure;
        r.failing = u.identical_inputs ? "identical_gap" : "distinct_gap";
    } else if (u.verdict == UniquenessReport::Inconclusive) {
        r.exit_code = ExitInconclusive;
        r.failing = "inconclusive";
    }
    return r;
}

CommandReport plan_path(const Scenario& s, std::ostream& log) {
    const GapConfiguration g = classify_gap(s.geometry[0], s.geometry[1]);
    CommandReport r;
    r.summary["gap"] = gap_to_json(g);
    if (g.kind == GapConfiguration::Unclassified) {
        log << "[plan-path] configuration unclassified: " << g.note << '\n';
        r.exit_code = ExitInconclusive;
        r.failing = "classification";
        return r;
    }
    if (g.kind != GapConfiguration::CaseII) {
        log << "[plan-path] " << (g.kind == GapConfiguration::Identical ? "identical obstacles" : "corner witness (CaseI)")
            << ": no reflection walk needed\n";
        return r;
    }
    std::vector<Vec2> pts;
    for (const auto& p : s.config.at("path").at("waypoints")) pts.push_back({p[0].get<double>(), p[1].get<double>()});
    const Vec2 ray{s.config.at("path").at("ray")[0].get<double>(), s.config.at("path").at("ray")[1].get<double>()};
    const Polygon& obstacle = s.geometry[static_cast<std::size_t>(g.other - 1)];
    ReflectionPlan plan;
    try {
        plan = plan_reflections(g, obstacle, EscapePath(pts, ray), s.config.at("budget").get<int>());
    } catch (const CornerHitError& e) {
        r.summary["corner_hit_step"] = e.step;
        r.exit_code = ExitInputError;
        r.failing = "corner_hit";
        log << "[plan-path] " << e.what() << " (step " << e.step << ")\n";
        return r;
    }
    r.summary["plan"] = plan_to_json(plan);
    CsvWriter csv(s.out / "steps.csv", s, {"line a*x+b*y+c=0 of the side of Omega_n met last by gamma"},
                  "n,t,px,py,side,a,b,c,area");
    for (std::size_t n = 0; n < plan.steps.size(); ++n) {
        const ReflectionStep& st = plan.steps[n];
        const auto co = st.line.coefficients();
        csv.row({double(n), st.t, st.point.x, st.point.y, double(st.side), co[0], co[1], co[2], st.domain.area()});
    }
    {
        std::ofstream os(s.out / "plan.json");
        os << json{{"gap", r.summary["gap"]}, {"plan", r.summary["plan"]}}.dump(2) << '\n';
    }
    if (plan.termination == ReflectionPlan::BudgetExceeded) {
        r.exit_code = ExitInvariantFailure;
        r.failing = "budget";
        r.summary["budget_step"] = plan.final_domain;
        log << "[plan-path] budget exhausted at step " << plan.final_domain << '\n';
        return r;
    }
    const bool ok = verify_certificate(plan, obstacle);
    r.summary["certificate_verified"] = ok;
    log << "[plan-path] " << (plan.termination == ReflectionPlan::FullLine ? "FullLine" : "SectorPair") << " at step "
        << plan.final_domain << ", certificate " << (ok ? "verified" : "REJECTED") << '\n';
    if (!ok) {
        r.exit_code = ExitInvariantFailure;
        r.failing = "certificate";
    }
    return r;
}

}  // namespace

CommandReport run_scenario(const Scenario& s, std::ostream& log) {
    CommandReport r;
    try {
        std::filesystem::create_directories(s.out);
        if (s.command == "verify-harmonic")
            r = verify_harmonic(s, log);
        else if (s.command == "verify-helmholtz")
            r = verify_helmholtz(s, log);
        else if (s.command == "solve")
            r = solve(s, log);
        else if (s.command == "compare")
            r = compare(s, log);
        else if (s.command == "plan-path")
            r = plan_path(s, log);
        else
            throw InputError("unknown command " + s.command);
    } catch (const InputError& e) {
        r.exit_code = ExitInputError;
        r.failing = "input";
        r.summary["error"] = e.what();
        log << "[" << s.command << "] input error: " << e.what() << '\n';
    } catch (const std::filesystem::filesystem_error& e) {
        r.exit_code = ExitInputError;
        r.failing = "output";
        r.summary["error"] = e.what();
        log << "[" << s.command << "] " << e.what() << '\n';
    } catch (const std::runtime_error& e) {
        // ConvergenceError and RangeError: a numerical invariant failed
        r.exit_code = ExitInvariantFailure;
        r.failing = "numerical";
        r.summary["error"] = e.what();
        log << "[" << s.command << "] numerical failure: " << e.what() << '\n';
    }
    r.summary["scenario"] = s.config;
    r.summary["exit_code"] = r.exit_code;
    r.summary["failing"] = r.failing;
    std::ofstream os(s.out / "report.json");
    if (os) os << r.summary.dump(2) << '\n';
    return r;
}

}  // namespace impref
