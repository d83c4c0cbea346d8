#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "f2v/clip.hpp"
#include "f2v/geometry.hpp"

namespace f2v {

// Wrap-around correction: x for x >= 0, 1 + x otherwise.
constexpr double fv(double x) { return x >= 0.0 ? x : 1.0 + x; }

// Tolerance on the signed vertex-plane distance in classify_full_empty.
inline constexpr double kPlaneDistanceTolerance = 1e-12;

struct VolumeDiagnostics {
  std::size_t degenerate_polygons = 0;  // skipped, zero area or no normal
  std::size_t polygons_on_face_x1 = 0;  // skipped, lying on x=1
  std::size_t face_x1_edges = 0;        // edges feeding the face-area sum
  std::size_t cube_edge_endpoints = 0;  // endpoints feeding the edge-length sum
  std::size_t axis_parallel_edges = 0;  // x=1 edges with a normal along +-x

  VolumeDiagnostics& operator+=(const VolumeDiagnostics& o);
};

// Reference-phase volume inside the unit cube bounded by the given clipped
// polygons and the cube faces.
//
// Every polygon contributes area * n_x * centroid_x. Polygon edges lying on
// face x=1 (but not on the cube edge x=1 & z=1) contribute
// length * n_perp_z * midpoint_z to the face area, and their endpoints on that
// cube edge contribute sign(n_perp_y) * y to the edge length, where n_perp is
// the projected edge normal of the polygon. The face area and edge length are
// folded in through fv(). Polygons lying entirely on x=1 are ignored.
//
// Throws InvalidInputError on an empty list; such cells must go through
// classify_full_empty.
double cell_volume_fraction(std::span<const Polygon> polys,
                            VolumeDiagnostics* diag = nullptr);

// Full (1) or empty (0) classification of a cube no triangle cuts, from the
// side of the nearest triangle's plane (nearest by centroid distance to the
// cube center) on which the first off-plane cube vertex lies. Ties go to the
// earlier triangle. Throws ClassificationError if every cube vertex is within
// kPlaneDistanceTolerance of the plane.
double classify_full_empty(std::span<const Triangle> tris, const Point3& cube_center,
                           std::span<const Point3> cube_vertices);

// Full (1) or empty (0) classification of a point off the surface, from the
// side of the surface at the closest surface point. The side is taken
// against the angle-weighted normal of every triangle sharing that point, so
// points nearest to an edge or vertex are classified correctly on closed
// meshes. Absent when the closest point is farther than reach, where a
// partial triangle list may miss triangles sharing it. Throws
// ClassificationError if the point lies on the surface.
std::optional<double> classify_by_closest_triangle(
    std::span<const Triangle> tris, const Point3& point,
    double reach = std::numeric_limits<double>::infinity());

// Vertices of the unit cube in lexicographic (x fastest) order.
std::span<const Point3, 8> unit_cube_vertices();

struct ClippedCell {
  std::vector<Polygon> polygons;  // all non-empty clip results, input order
  bool has_cutting_polygon = false;
  std::size_t zero_length_edges = 0;
};

// True when the polygon has a well-defined normal and does not lie entirely
// within one cube face, i.e. it separates the cube interior.
bool is_cutting(const Polygon& poly);

// Clips every local-frame triangle against the unit cube.
ClippedCell clip_cell(std::span<const Triangle> local_tris);

enum class CellCategory { Interface, Full, Empty, Untouched };

struct UnitCubeResult {
  double fraction = 0.0;
  CellCategory category = CellCategory::Untouched;
  VolumeDiagnostics diagnostics;
  std::size_t zero_length_edges = 0;
};

// Single-cell driver: cell_volume_fraction when at least one polygon cuts the
// cube, classify_full_empty over the same triangles otherwise. Untouched
// (fraction 0) when the triangle list is empty.
UnitCubeResult unit_cube_fraction(std::span<const Triangle> local_tris);

}  // namespace f2v
