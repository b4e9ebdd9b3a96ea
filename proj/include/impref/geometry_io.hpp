#pragma once

#include <string>

#include "json.hpp"

#include "impref/geometry.hpp"

namespace impref {

/// {"vertices": [[x, y], ...], "bc": [["robin", lambda] | ["dirichlet"] | ["neumann"], ...]}.
/// A bc entry may also be an object {"kind": "robin", "lambda": 1.0}; a complex lambda is
/// written as [re, im]. A missing bc list means Neumann on every edge; a single entry
/// applies to every edge. Throws InputError on malformed input.
Polygon polygon_from_json(const nlohmann::json& j);
nlohmann::json polygon_to_json(const Polygon& poly);
Polygon load_polygon(const std::string& path);

BoundaryCondition bc_from_json(const nlohmann::json& j);
nlohmann::json bc_to_json(const BoundaryCondition& bc);

cplx complex_from_json(const nlohmann::json& j);
nlohmann::json complex_to_json(cplx z);

}  // namespace impref
