#include "f2v/volume.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <numbers>
#include <string>

#include "f2v/errors.hpp"

namespace f2v {

VolumeDiagnostics& VolumeDiagnostics::operator+=(const VolumeDiagnostics& o) {
  degenerate_polygons += o.degenerate_polygons;
  polygons_on_face_x1 += o.polygons_on_face_x1;
  face_x1_edges += o.face_x1_edges;
  cube_edge_endpoints += o.cube_edge_endpoints;
  axis_parallel_edges += o.axis_parallel_edges;
  return *this;
}

namespace {

constexpr double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

double cell_volume_fraction(std::span<const Polygon> polys, VolumeDiagnostics* diag) {
  if (polys.empty()) {
    throw InvalidInputError("cell_volume_fraction: no polygons, classify the cell instead");
  }
  VolumeDiagnostics local;
  double volume = 0.0;
  double face_area = 0.0;
  double edge_length = 0.0;

  for (const Polygon& poly : polys) {
    if (poly.common_faces().has(CubeFace::XMax)) {
      ++local.polygons_on_face_x1;
      continue;
    }
    PolygonMeasures m;
    try {
      m = measure_polygon(poly);
    } catch (const DegeneratePolygonError&) {
      ++local.degenerate_polygons;
      continue;
    }
    volume += m.area * m.normal.x * m.centroid.x;

    const std::size_t n = poly.size();
    for (std::size_t j = 0; j < n; ++j) {
      const Vertex& a = poly[j];
      const Vertex& b = poly[(j + 1) % n];
      const FaceMask edge = a.mask & b.mask;
      if (!edge.has(CubeFace::XMax) || edge.contains(kEdgeXMaxZMax)) continue;
      if (m.normal.y == 0.0 && m.normal.z == 0.0) {
        ++local.axis_parallel_edges;
        continue;
      }
      ++local.face_x1_edges;
      const Point3 n_perp = projected_edge_normal(m.normal);
      const double length = norm(b.pos - a.pos);
      const double mid_z = 0.5 * (a.pos.z + b.pos.z);
      face_area += length * n_perp.z * mid_z;

      const double s = sign(n_perp.y);
      if (a.mask.contains(kEdgeXMaxZMax)) {
        edge_length += s * a.pos.y;
        ++local.cube_edge_endpoints;
      }
      if (b.mask.contains(kEdgeXMaxZMax)) {
        edge_length += s * b.pos.y;
        ++local.cube_edge_endpoints;
      }
    }
  }

  face_area += fv(edge_length);
  volume += fv(face_area);
  if (diag != nullptr) *diag += local;
  return fv(volume);
}

double classify_full_empty(std::span<const Triangle> tris, const Point3& cube_center,
                           std::span<const Point3> cube_vertices) {
  if (tris.empty()) throw InvalidInputError("classify_full_empty: no triangles");

  std::size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tris.size(); ++i) {
    const Point3 d = triangle_centroid(tris[i]) - cube_center;
    const double dist2 = dot(d, d);
    if (dist2 < best) {
      best = dist2;
      nearest = i;
    }
  }

  const Triangle& tri = tris[nearest];
  const Point3 n = triangle_normal(tri);
  const double len = norm(n);
  if (!(len > 0.0)) throw InvalidInputError("classify_full_empty: degenerate triangle");
  const Point3 unit = n / len;

  for (const Point3& corner : cube_vertices) {
    const double d = dot(tri[0] - corner, unit);
    if (std::abs(d) > kPlaneDistanceTolerance) return d > 0.0 ? 1.0 : 0.0;
  }
  throw ClassificationError("classify_full_empty: every cube vertex lies on the plane of triangle " +
                            std::to_string(nearest));
}

std::optional<double> classify_by_closest_triangle(std::span<const Triangle> tris,
                                                   const Point3& point, double reach) {
  if (tris.empty()) throw InvalidInputError("classify_by_closest_triangle: no triangles");

  std::vector<Point3> closest(tris.size());
  std::vector<double> dist2(tris.size());
  std::size_t nearest = 0;
  for (std::size_t i = 0; i < tris.size(); ++i) {
    closest[i] = closest_point_on_triangle(point, tris[i]);
    const Point3 d = point - closest[i];
    dist2[i] = dot(d, d);
    if (dist2[i] < dist2[nearest]) nearest = i;
  }
  const double best = dist2[nearest];
  if (!(best > 0.0)) throw ClassificationError("classify_by_closest_triangle: point on the surface");
  if (best > reach * reach) return std::nullopt;

  // Angle-weighted normal at the closest point over every triangle sharing it.
  const Point3 q = closest[nearest];
  const double limit = best * (1.0 + 1e-9);
  const double snap2 = 1e-18 * best;
  Point3 pseudo;
  for (std::size_t i = 0; i < tris.size(); ++i) {
    if (dist2[i] > limit) continue;
    const Point3 gap = closest[i] - q;
    if (dot(gap, gap) > snap2) continue;
    const Triangle& t = tris[i];
    const Point3 n = triangle_normal(t);
    const double len = norm(n);
    if (!(len > 0.0)) continue;
    double weight = 2.0 * std::numbers::pi;
    for (int k = 0; k < 3; ++k) {
      const Point3 off = closest[i] - t[k];
      if (dot(off, off) <= snap2) {
        const Point3 e1 = t[(k + 1) % 3] - t[k];
        const Point3 e2 = t[(k + 2) % 3] - t[k];
        weight = std::atan2(norm(cross(e1, e2)), dot(e1, e2));
        break;
      }
      const Point3 e = t[(k + 1) % 3] - t[k];
      const Point3 perp = off - dot(off, e) / dot(e, e) * e;
      if (dot(perp, perp) <= snap2) weight = std::numbers::pi;
    }
    pseudo += weight / len * n;
  }
  const double side = dot(q - point, pseudo);
  if (side == 0.0) {
    throw ClassificationError("classify_by_closest_triangle: ambiguous side at the closest point");
  }
  return side > 0.0 ? 1.0 : 0.0;
}

std::span<const Point3, 8> unit_cube_vertices() {
  static constexpr Point3 kCorners[8] = {
      {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0},
      {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1},
  };
  return std::span<const Point3, 8>(kCorners);
}

bool is_cutting(const Polygon& poly) {
  if (!poly.common_faces().empty()) return false;
  try {
    (void)measure_polygon(poly);
  } catch (const DegeneratePolygonError&) {
    return false;
  }
  return true;
}

ClippedCell clip_cell(std::span<const Triangle> local_tris) {
  ClippedCell cell;
  for (const Triangle& tri : local_tris) {
    ClipResult r = clip_triangle(tri);
    cell.zero_length_edges += r.zero_length_edges;
    if (!r.polygon) continue;
    if (!cell.has_cutting_polygon && is_cutting(*r.polygon)) cell.has_cutting_polygon = true;
    cell.polygons.push_back(std::move(*r.polygon));
  }
  return cell;
}

UnitCubeResult unit_cube_fraction(std::span<const Triangle> local_tris) {
  UnitCubeResult out;
  if (local_tris.empty()) return out;

  ClippedCell cell = clip_cell(local_tris);
  out.zero_length_edges = cell.zero_length_edges;
  if (cell.has_cutting_polygon) {
    out.fraction = cell_volume_fraction(cell.polygons, &out.diagnostics);
    out.category = CellCategory::Interface;
    return out;
  }
  out.fraction = classify_full_empty(local_tris, Point3{0.5, 0.5, 0.5}, unit_cube_vertices());
  out.category = out.fraction > 0.5 ? CellCategory::Full : CellCategory::Empty;
  return out;
}

}  // namespace f2v
