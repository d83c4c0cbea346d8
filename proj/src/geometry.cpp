#include "f2v/geometry.hpp"

#include "f2v/errors.hpp"

namespace f2v {

Polygon::Polygon(std::initializer_list<Point3> pts) {
  vertices.reserve(pts.size());
  for (const Point3& p : pts) vertices.push_back(Vertex{p, false, FaceMask{}});
}

Polygon::Polygon(const Triangle& tri) {
  vertices.reserve(3);
  for (const Point3& p : tri) vertices.push_back(Vertex{p, false, FaceMask{}});
}

FaceMask Polygon::common_faces() const {
  if (vertices.empty()) return FaceMask{};
  FaceMask m = vertices.front().mask;
  for (const Vertex& v : vertices) m = m & v.mask;
  return m;
}

Point3 vertex_mean(const Polygon& poly) {
  Point3 sum;
  for (const Vertex& v : poly.vertices) sum += v.pos;
  return sum / static_cast<double>(poly.size());
}

namespace {

Point3 fan_cross(const Polygon& poly, const Point3& apex, std::size_t i) {
  const std::size_t n = poly.size();
  return cross(poly[i].pos - apex, poly[(i + 1) % n].pos - apex);
}

Point3 fan_normal(const Polygon& poly, const Point3& apex) {
  const std::size_t n = poly.size();
  Point3 largest;
  double largest_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point3 c = fan_cross(poly, apex, i);
    const double len = norm(c);
    if (len >= kNormalTolerance) return c / len;
    if (len > largest_norm) {
      largest_norm = len;
      largest = c;
    }
  }
  // Polygons smaller than the tolerance still have a usable orientation.
  if (largest_norm > 0.0) return largest / largest_norm;
  throw DegeneratePolygonError("polygon has no non-degenerate fan triangle");
}

}  // namespace

double polygon_area(const Polygon& poly) {
  const Point3 apex = vertex_mean(poly);
  double area = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    area += 0.5 * norm(fan_cross(poly, apex, i));
  }
  return area;
}

Point3 polygon_centroid(const Polygon& poly) {
  return measure_polygon(poly).centroid;
}

Point3 polygon_unit_normal(const Polygon& poly) {
  if (poly.size() < 3) throw DegeneratePolygonError("polygon has fewer than 3 vertices");
  return fan_normal(poly, vertex_mean(poly));
}

PolygonMeasures measure_polygon(const Polygon& poly) {
  if (poly.size() < 3) throw DegeneratePolygonError("polygon has fewer than 3 vertices");
  const std::size_t n = poly.size();
  const Point3 apex = vertex_mean(poly);

  PolygonMeasures m;
  Point3 weighted;
  for (std::size_t i = 0; i < n; ++i) {
    const Point3& a = poly[i].pos;
    const Point3& b = poly[(i + 1) % n].pos;
    const double s = 0.5 * norm(cross(a - apex, b - apex));
    m.area += s;
    weighted += s * (a + b + apex);
  }
  if (!(m.area > 0.0)) throw DegeneratePolygonError("polygon has zero area");
  m.centroid = weighted / (3.0 * m.area);
  m.normal = fan_normal(poly, apex);
  return m;
}

Point3 projected_edge_normal(const Point3& poly_normal) {
  const Point3 in_face{0.0, poly_normal.y, poly_normal.z};
  const double len = norm(in_face);
  if (!(len > 0.0)) {
    throw InvalidInputError("projected_edge_normal: normal is parallel to the x axis");
  }
  return in_face / len;
}

Point3 triangle_normal(const Triangle& tri) {
  return cross(tri[1] - tri[0], tri[2] - tri[0]);
}

double triangle_area(const Triangle& tri) { return 0.5 * norm(triangle_normal(tri)); }

Point3 triangle_centroid(const Triangle& tri) {
  return (tri[0] + tri[1] + tri[2]) / 3.0;
}

Point3 closest_point_on_triangle(const Point3& p, const Triangle& tri) {
  const Point3& a = tri[0];
  const Point3& b = tri[1];
  const Point3& c = tri[2];
  const Point3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Point3 bp = p - b;
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + d1 / (d1 - d3) * ab;

  const Point3 cp = p - c;
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + d2 / (d2 - d6) * ac;

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0) {
    return b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b);
  }

  const double denom = 1.0 / (va + vb + vc);
  return a + vb * denom * ab + vc * denom * ac;
}

}  // namespace f2v
