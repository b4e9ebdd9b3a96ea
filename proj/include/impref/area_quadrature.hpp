#pragma once

#include <vector>

#include "impref/geometry.hpp"

namespace impref {

struct AreaNode {
    Vec2 y;
    double weight;
};

struct AreaQuadSpec {
    int order = 8;                     // Gauss points per direction on each triangle
    int tube_depth = 2;                // refinement levels near the cut segments
    double tube_radius_factor = 0.05;  // tube radius relative to diam(K)
    int focus_grading = 0;             // geometric levels in the collapsed direction when focus is a vertex
};

/// Area rule on a simple polygon. Triangles are split along the full lines of every cut
/// segment so that no triangle straddles a cut; triangles within the tube around the cut
/// segments are refined; each triangle uses a collapsed (Duffy) tensor rule whose
/// collapsed vertex is the one nearest `focus`. The collapse removes a 1/r singularity there;
/// a log singularity additionally needs `focus_grading` levels.
std::vector<AreaNode> area_rule(const Polygon& region, const std::vector<Segment>& cuts, Vec2 focus,
                                const AreaQuadSpec& spec = {});

/// Splits a convex polygon by a line; returns the non-degenerate pieces.
std::vector<std::vector<Vec2>> split_convex(const std::vector<Vec2>& poly, const Line& line, double tol);

}  // namespace impref
