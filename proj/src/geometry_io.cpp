#include "impref/geometry_io.hpp"

#include <fstream>

namespace impref {

cplx complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
    throw InputError("expected a number or [re, im], got " + j.dump());
}

nlohmann::json complex_to_json(cplx z) {
    if (z.imag() == 0.0) return z.real();
    return nlohmann::json::array({z.real(), z.imag()});
}

BoundaryCondition bc_from_json(const nlohmann::json& j) {
    std::string kind;
    nlohmann::json lam;
    if (j.is_string()) {
        kind = j.get<std::string>();
    } else if (j.is_array() && !j.empty() && j[0].is_string()) {
        kind = j[0].get<std::string>();
        if (j.size() > 1) lam = j[1];
    } else if (j.is_object() && j.contains("kind")) {
        kind = j.at("kind").get<std::string>();
        if (j.contains("lambda")) lam = j.at("lambda");
    } else {
        throw InputError("malformed boundary condition: " + j.dump());
    }
    if (kind == "dirichlet") return BoundaryCondition::dirichlet();
    if (kind == "neumann") return BoundaryCondition::neumann();
    if (kind == "robin") {
        if (lam.is_null()) throw InputError("robin condition needs lambda");
        return BoundaryCondition::robin(complex_from_json(lam));
    }
    throw InputError("unknown boundary condition kind: " + kind);
}

nlohmann::json bc_to_json(const BoundaryCondition& bc) {
    switch (bc.kind) {
        case BcKind::Robin: return nlohmann::json::array({"robin", complex_to_json(bc.lambda)});
        case BcKind::Dirichlet: return nlohmann::json::array({"dirichlet"});
        case BcKind::Neumann: break;
    }
    return nlohmann::json::array({"neumann"});
}

Polygon polygon_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.at("vertices").is_array())
        throw InputError("polygon: 'vertices' array required");
    std::vector<Vec2> v;
    for (const auto& p : j.at("vertices")) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw InputError("polygon: vertex must be [x, y], got " + p.dump());
        v.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    std::vector<BoundaryCondition> bc;
    if (j.contains("bc")) {
        const auto& b = j.at("bc");
        if (!b.is_array()) throw InputError("polygon: 'bc' must be a list");
        for (const auto& e : b) bc.push_back(bc_from_json(e));
        if (bc.size() == 1) bc.assign(v.size(), bc.front());
        if (bc.size() != v.size()) throw InputError("polygon: 'bc' needs one entry per edge");
    }
    return Polygon(std::move(v), std::move(bc));
}

nlohmann::json polygon_to_json(const Polygon& poly) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const Vec2& p : poly.vertices()) j["vertices"].push_back({p.x, p.y});
    j["bc"] = nlohmann::json::array();
    for (const auto& b : poly.bcs()) j["bc"].push_back(bc_to_json(b));
    return j;
}

Polygon load_polygon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open polygon file " + path);
    try {
        return polygon_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw InputError("polygon file " + path + ": " + e.what());
    }
}

}  // namespace impref
