#include "impref/scenario.hpp"

#include <fstream>

#include "impref/geometry_io.hpp"

namespace impref {

namespace {

using nlohmann::json;

json default_wave() { return {{"k", 1.0}, {"lambda", 0.5}, {"d", {std::sqrt(0.75), -0.5}}}; }

json default_mesh() { return {{"panels_per_edge", 16}, {"grading", 3.0}}; }

// Objects merge key by key; anything else in `user` replaces the default.
json merged(const json& defaults, const json& user) {
    if (!defaults.is_object() || !user.is_object()) return user;
    json out = defaults;
    for (auto it = user.begin(); it != user.end(); ++it)
        out[it.key()] = defaults.contains(it.key()) ? merged(defaults.at(it.key()), it.value()) : it.value();
    return out;
}

double positive(const json& j, const std::string& name) {
    if (!j.is_number()) throw InputError("scenario: " + name + " must be a number");
    const double v = j.get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("scenario: " + name + " must be positive");
    return v;
}

int positive_int(const json& j, const std::string& name) {
    if (!j.is_number_integer() || j.get<long long>() < 1) throw InputError("scenario: " + name + " must be a positive integer");
    return j.get<int>();
}

void check_range(const json& j, const std::string& name) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number() || !(j[0].get<double>() < j[1].get<double>()))
        throw InputError("scenario: " + name + " must be [lo, hi] with lo < hi");
}

void check_vec2(const json& j, const std::string& name) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InputError("scenario: " + name + " must be [x, y]");
}

void check_wave(const json& w, bool scattering) {
    if (!w.is_object()) throw InputError("scenario: wave must be an object");
    positive(w.at("k"), "wave.k");
    check_vec2(w.at("d"), "wave.d");
    const cplx lam = complex_from_json(w.at("lambda"));
    const Vec2 d{w.at("d")[0].get<double>(), w.at("d")[1].get<double>()};
    if (std::abs(norm(d) - 1.0) > 1e-12) throw InputError("scenario: wave.d must be a unit vector");
    if (scattering && (lam.imag() != 0.0 || lam.real() < 0.0))
        throw InputError("scenario: scattering needs real wave.lambda >= 0");
}

void check_grid(const json& g) {
    positive_int(g.at("n"), "grid.n");
    check_range(g.at("x1"), "grid.x1");
    check_range(g.at("x2"), "grid.x2");
    if (g.at("x2")[0].get<double>() < 0.0) throw InputError("scenario: grid.x2 must lie in x2 >= 0");
}

}  // namespace

json scenario_defaults(const std::string& command) {
    json d;
    d["command"] = command;
    d["seed"] = 1;
    if (command == "verify-harmonic") {
        d["lambdas"] = {0.5, 1.0, 2.0};
        d["grid"] = {{"n", 20}, {"x1", {-1.0, 1.0}}, {"x2", {0.0, 2.0}}};
        d["random_points"] = 1000;
        d["probe_points"] = 8;
        d["tolerances"] = {{"exactness", 1e-8}, {"path_independence", 1e-8}, {"kernel", 1e-10},
                           {"harmonicity", 1e-5}, {"cauchy_value", 1e-6}, {"cauchy_normal", 1e-5}};
    } else if (command == "verify-helmholtz") {
        d["wave"] = default_wave();
        d["grid"] = {{"n", 10}, {"x1", {-1.0, 1.0}}, {"x2", {0.0, 2.0}}};
        d["area_quadrature"] = {{"order", 8}, {"tube_depth", 0}, {"tube_radius_factor", 0.05}};
        d["probe_points"] = 5;
        d["sector_openings"] = {2, 3};
        d["tolerances"] = {{"plane_wave", 1e-4}, {"k_invariance", 1e-6}, {"sector", 1e-4}, {"tiling", 1e-12}};
    } else if (command == "solve") {
        d["wave"] = default_wave();
        d["wave"]["lambda"] = 1.0;
        d["wave"]["d"] = {1.0, 0.0};
        d["mesh"] = default_mesh();
        d["formulation"] = "impedance";
        d["far_field_samples"] = 256;
        d["tolerances"] = {{"rcond", 1e-6}};
    } else if (command == "compare") {
        d["wave"] = default_wave();
        d["wave"]["lambda"] = 1.0;
        d["wave"]["d"] = {1.0, 0.0};
        d["lambda2"] = nullptr;
        d["mesh"] = default_mesh();
        d["far_field_samples"] = 128;
        d["criteria"] = {{"identical_factor", 3.0}, {"distinct_factor", 10.0}};
    } else if (command == "plan-path") {
        d["budget"] = 16;
        d["path"] = {{"waypoints", json::array()}, {"ray", {0.0, 1.0}}};
    } else {
        throw InputError("scenario: unknown command '" + command + "'");
    }
    return d;
}

Scenario scenario_from_json(const json& j, const std::filesystem::path& base_dir, const RunOverrides& ov) {
    if (!j.is_object() || !j.contains("command") || !j.at("command").is_string())
        throw InputError("scenario: 'command' string required");
    Scenario s;
    s.command = j.at("command").get<std::string>();
    try {
        s.config = merged(scenario_defaults(s.command), j);
        json& c = s.config;
        if (ov.seed) c["seed"] = *ov.seed;
        if (!c.at("seed").is_number_integer() || (!c.at("seed").is_number_unsigned() && c.at("seed").get<long long>() < 0))
            throw InputError("scenario: seed must be a non-negative integer");
        s.seed = c.at("seed").get<std::uint64_t>();
        if (!(ov.tolerance_scale > 0.0)) throw InputError("tolerance scale must be positive");
        if (c.contains("tolerances")) {
            for (auto& [name, v] : c["tolerances"].items()) v = positive(v, "tolerances." + name) * ov.tolerance_scale;
            c["tolerance_scale"] = ov.tolerance_scale;
        }
        if (ov.out)
            c["out"] = ov.out->string();
        else if (!c.contains("out"))
            c["out"] = (std::filesystem::path("out") / s.command).string();
        s.out = c.at("out").get<std::string>();
        c["jobs"] = std::max(1, ov.jobs);
        c["flip_kernel_sign"] = ov.flip_kernel_sign;

        const std::size_t need = s.command == "solve" ? 1 : (s.command == "compare" || s.command == "plan-path") ? 2 : 0;
        if (need > 0) {
            if (!c.contains("geometry") || !c.at("geometry").is_array() || c.at("geometry").size() != need)
                throw InputError("scenario: 'geometry' must list " + std::to_string(need) + " polygon file(s)");
            for (const auto& g : c.at("geometry")) {
                if (g.is_object()) {
                    s.geometry.push_back(polygon_from_json(g));
                    continue;
                }
                if (!g.is_string()) throw InputError("scenario: geometry entries are file names or polygon objects");
                std::filesystem::path p = g.get<std::string>();
                if (p.is_relative()) p = base_dir / p;
                if (!std::filesystem::exists(p)) throw InputError("scenario: geometry file not found: " + p.string());
                s.geometry.push_back(load_polygon(p.string()));
            }
        }

        if (c.contains("grid")) check_grid(c.at("grid"));
        if (c.contains("wave")) check_wave(c.at("wave"), s.command == "solve" || s.command == "compare");
        if (s.command == "verify-harmonic") {
            if (!c.at("lambdas").is_array() || c.at("lambdas").empty()) throw InputError("scenario: lambdas must be a list");
            for (const auto& l : c.at("lambdas"))
                if (!l.is_number() || l.get<double>() < 0.0) throw InputError("scenario: lambdas must be non-negative");
            positive_int(c.at("random_points"), "random_points");
            positive_int(c.at("probe_points"), "probe_points");
        }
        if (s.command == "verify-helmholtz") {
            positive_int(c.at("probe_points"), "probe_points");
            positive_int(c.at("area_quadrature").at("order"), "area_quadrature.order");
            for (const auto& m : c.at("sector_openings"))
                if (!m.is_number_integer() || m.get<int>() < 2) throw InputError("scenario: sector_openings entries are integers >= 2");
        }
        if (c.contains("mesh")) {
            positive_int(c.at("mesh").at("panels_per_edge"), "mesh.panels_per_edge");
            if (positive(c.at("mesh").at("grading"), "mesh.grading") < 1.0) throw InputError("scenario: mesh.grading must be >= 1");
        }
        if (c.contains("far_field_samples") && positive_int(c.at("far_field_samples"), "far_field_samples") < 64)
            throw InputError("scenario: far_field_samples must be at least 64");
        if (s.command == "solve") {
            const std::string f = c.at("formulation").get<std::string>();
            if (f != "impedance" && f != "sound-soft") throw InputError("scenario: formulation is impedance or sound-soft");
        }
        if (s.command == "compare") {
            if (!c.at("lambda2").is_null()) {
                const cplx l2 = complex_from_json(c.at("lambda2"));
                if (l2.imag() != 0.0 || l2.real() < 0.0) throw InputError("scenario: lambda2 must be real and >= 0");
            }
            positive(c.at("criteria").at("identical_factor"), "criteria.identical_factor");
            positive(c.at("criteria").at("distinct_factor"), "criteria.distinct_factor");
        }
        if (s.command == "plan-path") {
            const json& p = c.at("path");
            if (!p.at("waypoints").is_array() || p.at("waypoints").empty())
                throw InputError("scenario: path.waypoints must list at least the start point");
            for (const auto& w : p.at("waypoints")) check_vec2(w, "path.waypoints[]");
            check_vec2(p.at("ray"), "path.ray");
            if (!c.at("budget").is_number_integer() || c.at("budget").get<int>() < 0)
                throw InputError("scenario: budget must be a non-negative integer");
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("scenario: ") + e.what());
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& file, const RunOverrides& ov) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open scenario file " + file.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("scenario " + file.string() + ": " + e.what());
    }
    RunOverrides o = ov;
    if (!o.out && !j.contains("out")) o.out = std::filesystem::path("out") / file.stem();
    Scenario s = scenario_from_json(j, file.parent_path(), o);
    s.source = file;
    s.config["source"] = file.string();
    return s;
}

}  // namespace impref
