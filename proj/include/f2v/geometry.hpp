#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace f2v {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](std::size_t axis) const {
    return axis == 0 ? x : (axis == 1 ? y : z);
  }
  constexpr double& operator[](std::size_t axis) {
    return axis == 0 ? x : (axis == 1 ? y : z);
  }

  constexpr Point3& operator+=(const Point3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Point3& operator-=(const Point3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Point3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Point3&, const Point3&) = default;
};

constexpr Point3 operator+(Point3 a, const Point3& b) { return a += b; }
constexpr Point3 operator-(Point3 a, const Point3& b) { return a -= b; }
constexpr Point3 operator-(const Point3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Point3 operator*(Point3 a, double s) { return a *= s; }
constexpr Point3 operator*(double s, Point3 a) { return a *= s; }
constexpr Point3 operator/(const Point3& a, double s) {
  return {a.x / s, a.y / s, a.z / s};
}

constexpr double dot(const Point3& a, const Point3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
constexpr Point3 cross(const Point3& a, const Point3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Point3& a) { return std::sqrt(dot(a, a)); }
inline bool is_finite(const Point3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// Cube faces in the order x=0, x=1, y=0, y=1, z=0, z=1.
enum class CubeFace : std::uint8_t { XMin = 0, XMax, YMin, YMax, ZMin, ZMax };

constexpr CubeFace min_face(std::size_t axis) {
  return static_cast<CubeFace>(2 * axis);
}
constexpr CubeFace max_face(std::size_t axis) {
  return static_cast<CubeFace>(2 * axis + 1);
}

// Bit i set means the vertex lies exactly on cube face i.
class FaceMask {
 public:
  constexpr FaceMask() = default;
  constexpr explicit FaceMask(std::uint8_t bits) : bits_(bits) {}
  constexpr FaceMask(std::initializer_list<CubeFace> faces) {
    for (CubeFace f : faces) bits_ |= bit(f);
  }

  constexpr std::uint8_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool has(CubeFace f) const { return (bits_ & bit(f)) != 0; }
  constexpr bool contains(FaceMask other) const {
    return (bits_ & other.bits_) == other.bits_;
  }
  constexpr void set(CubeFace f) { bits_ |= bit(f); }
  constexpr int count() const {
    int n = 0;
    for (std::uint8_t b = bits_; b != 0; b &= static_cast<std::uint8_t>(b - 1)) ++n;
    return n;
  }

  friend constexpr FaceMask operator&(FaceMask a, FaceMask b) {
    return FaceMask(static_cast<std::uint8_t>(a.bits_ & b.bits_));
  }
  friend constexpr FaceMask operator|(FaceMask a, FaceMask b) {
    return FaceMask(static_cast<std::uint8_t>(a.bits_ | b.bits_));
  }
  friend constexpr bool operator==(FaceMask, FaceMask) = default;

 private:
  static constexpr std::uint8_t bit(CubeFace f) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(f));
  }
  std::uint8_t bits_ = 0;
};

// The cube edge shared by faces x=1 and z=1.
inline constexpr FaceMask kEdgeXMaxZMax{CubeFace::XMax, CubeFace::ZMax};

struct Vertex {
  Point3 pos;
  bool rm = false;
  FaceMask mask;
};

using Triangle = std::array<Point3, 3>;

// Ordered vertex loop, counter-clockwise about the outward normal of the
// reference phase.
struct Polygon {
  std::vector<Vertex> vertices;

  Polygon() = default;
  explicit Polygon(std::vector<Vertex> v) : vertices(std::move(v)) {}
  Polygon(std::initializer_list<Point3> pts);
  explicit Polygon(const Triangle& tri);

  std::size_t size() const { return vertices.size(); }
  const Vertex& operator[](std::size_t i) const { return vertices[i]; }
  Vertex& operator[](std::size_t i) { return vertices[i]; }
  // Bitwise AND over every vertex mask: the faces the whole polygon lies on.
  FaceMask common_faces() const;
};

Point3 vertex_mean(const Polygon& poly);

// Fan decomposition about vertex_mean.
double polygon_area(const Polygon& poly);

// Throws DegeneratePolygonError when the area is zero.
Point3 polygon_centroid(const Polygon& poly);

// Normal of the first fan triangle. Falls back to the first fan triangle
// whose cross product reaches kNormalTolerance, then to the largest non-zero
// one; throws DegeneratePolygonError if every fan cross product vanishes.
Point3 polygon_unit_normal(const Polygon& poly);

inline constexpr double kNormalTolerance = 1e-14;

struct PolygonMeasures {
  double area = 0.0;
  Point3 centroid;
  Point3 normal;
};

// Area, centroid and normal in a single pass; same arithmetic as the three
// individual functions.
PolygonMeasures measure_polygon(const Polygon& poly);

// In-face outward normal on face x=1: the polygon normal with its x
// component removed, renormalized. Throws InvalidInputError when the normal
// is parallel to the x axis.
Point3 projected_edge_normal(const Point3& poly_normal);

Point3 triangle_normal(const Triangle& tri);  // unnormalized, |n| = 2 * area
double triangle_area(const Triangle& tri);
Point3 triangle_centroid(const Triangle& tri);

// Point of the triangle nearest to p (Voronoi-region walk).
Point3 closest_point_on_triangle(const Point3& p, const Triangle& tri);

}  // namespace f2v
