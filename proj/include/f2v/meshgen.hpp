#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "f2v/geometry.hpp"

namespace f2v {

using Face = std::array<std::uint32_t, 3>;

struct IndexedMesh {
  std::vector<Point3> vertices;
  std::vector<Face> faces;

  std::vector<Triangle> triangles() const;
};

// Merges vertices with bit-identical coordinates.
IndexedMesh weld(std::span<const Triangle> soup);

struct TopologyReport {
  std::size_t boundary_edges = 0;     // used by one face
  std::size_t nonmanifold_edges = 0;  // used by three or more faces
  std::size_t misoriented_edges = 0;  // two faces traversing it the same way
  bool closed() const {
    return boundary_edges == 0 && nonmanifold_edges == 0 && misoriented_edges == 0;
  }
};

TopologyReport check_topology(const IndexedMesh& mesh);

struct SphereSpec {
  Point3 center;
  double radius = 1.0;
  double edge_length = 0.1;  // target average side length
};

struct SphericalAngle {
  double theta = 0.0;
  double phi = 0.0;
};

// Pole vertices at (0, pi) and (pi, pi), then floor(pi r / l) uniform theta
// intervals whose interior rings carry floor(2 pi r sin(theta) / l) uniform
// phi values each. Order: north pole, rings by increasing theta (phi
// ascending within a ring), south pole. Throws InvalidInputError if the
// spec is invalid or yields fewer than two theta intervals.
std::vector<SphericalAngle> sphere_vertices(const SphereSpec& spec);

int theta_intervals(const SphereSpec& spec);

// Closed, outward-oriented sphere surface: Delaunay triangulation of the
// (theta, phi) vertex set with the phi = 0 column duplicated at phi = 2 pi,
// mapped to Cartesian and the seam merged.
IndexedMesh triangulate_sphere_indexed(const SphereSpec& spec);
std::vector<Triangle> triangulate_sphere(const SphereSpec& spec);

std::vector<Triangle> translate_mesh(std::span<const Triangle> mesh, const Point3& offset);

// Equilateral triangle of the given side, centroid (alpha, alpha, alpha),
// lying in the plane m . X = alpha (m normalized so its components sum to 1).
// Unit normal is +m/|m| for orientation > 0 and -m/|m| otherwise.
Triangle plane_element(const Point3& m, double alpha, double side, int orientation);

struct Point2 {
  double u = 0.0;
  double v = 0.0;
};

// Lawson edge flips turning a valid planar triangulation (counter-clockwise
// faces) into a Delaunay one. Cocircular quadruples within a relative
// tolerance are left as they are.
std::vector<Face> delaunay_flip(std::span<const Point2> points, std::vector<Face> faces);

// True when no vertex of a neighbouring face lies strictly inside the
// circumcircle of a face (relative tolerance).
bool is_locally_delaunay(std::span<const Point2> points, std::span<const Face> faces);

}  // namespace f2v
