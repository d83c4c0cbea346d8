#pragma once

#include <cstddef>
#include <optional>

#include "f2v/geometry.hpp"

namespace f2v {

// Snapping tolerance, absolute in the local unit-cube frame.
inline constexpr double kSnapEpsilon = 1e-12;

// Rebuilds every vertex mask from scratch, snapping coordinates within
// kSnapEpsilon of 0 or 1 onto the face.
Polygon flag_vertices(Polygon poly);
void flag_vertices_in_place(Polygon& poly);

// Parameter of the crossing of segment [x1, x2] with the plane x = xp.
// Absent when the segment is parallel to the plane or the crossing is not
// strictly interior, so endpoints lying on the plane never split an edge.
std::optional<double> line_plane_alpha(double x1, double x2, double xp);

struct ClipResult {
  std::optional<Polygon> polygon;  // absent when nothing of area survives
  std::size_t zero_length_edges = 0;  // coincident consecutive vertices removed
};

// Portion of a triangle (given in the local frame) inside the unit cube.
//
// Axes are processed x, y, z. For each axis the vertices outside the slab
// 0 <= c <= 1 are marked, the crossings of every edge of the pre-insertion
// polygon with the planes c = 0 and c = 1 are inserted in ascending order
// along the edge, marked vertices are dropped and the masks rebuilt. Fewer
// than three surviving vertices yields an empty result.
ClipResult clip_triangle(const Triangle& tri);

}  // namespace f2v
