#include "f2v/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <unordered_map>
#include <utility>

#include "f2v/errors.hpp"

namespace f2v {

std::vector<Triangle> IndexedMesh::triangles() const {
  std::vector<Triangle> out;
  out.reserve(faces.size());
  for (const Face& f : faces) out.push_back({vertices[f[0]], vertices[f[1]], vertices[f[2]]});
  return out;
}

IndexedMesh weld(std::span<const Triangle> soup) {
  IndexedMesh mesh;
  std::map<std::array<double, 3>, std::uint32_t> index;
  mesh.faces.reserve(soup.size());
  for (const Triangle& tri : soup) {
    Face f{};
    for (std::size_t k = 0; k < 3; ++k) {
      const std::array<double, 3> key{tri[k].x, tri[k].y, tri[k].z};
      auto [it, inserted] = index.try_emplace(key, static_cast<std::uint32_t>(mesh.vertices.size()));
      if (inserted) mesh.vertices.push_back(tri[k]);
      f[k] = it->second;
    }
    mesh.faces.push_back(f);
  }
  return mesh;
}

namespace {

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

TopologyReport check_topology(const IndexedMesh& mesh) {
  struct Use {
    int faces = 0;
    int forward = 0;  // traversed from the smaller to the larger index
  };
  std::unordered_map<std::uint64_t, Use> uses;
  for (const Face& f : mesh.faces) {
    for (std::size_t k = 0; k < 3; ++k) {
      const std::uint32_t a = f[k], b = f[(k + 1) % 3];
      Use& u = uses[edge_key(a, b)];
      ++u.faces;
      if (a < b) ++u.forward;
    }
  }
  TopologyReport r;
  for (const auto& [key, u] : uses) {
    if (u.faces == 1) {
      ++r.boundary_edges;
    } else if (u.faces > 2) {
      ++r.nonmanifold_edges;
    } else if (u.forward != 1) {
      ++r.misoriented_edges;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Planar Delaunay by edge flips

namespace {

double orient(const Point2& a, const Point2& b, const Point2& c) {
  return (b.u - a.u) * (c.v - a.v) - (b.v - a.v) * (c.u - a.u);
}

// d strictly inside the circumcircle of counter-clockwise (a, b, c).
bool in_circle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double adx = a.u - d.u, ady = a.v - d.v;
  const double bdx = b.u - d.u, bdy = b.v - d.v;
  const double cdx = c.u - d.u, cdy = c.v - d.v;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  const double det = adx * (bdy * clift - cdy * blift) - ady * (bdx * clift - cdx * blift) +
                     alift * (bdx * cdy - bdy * cdx);
  const double permanent = std::abs(adx) * (std::abs(bdy) * clift + std::abs(cdy) * blift) +
                           std::abs(ady) * (std::abs(bdx) * clift + std::abs(cdx) * blift) +
                           alift * (std::abs(bdx * cdy) + std::abs(bdy * cdx));
  return det > 1e-10 * permanent;
}

using EdgeFaces = std::array<int, 2>;

// Vertex of f not on the edge (a, b).
std::uint32_t opposite(const Face& f, std::uint32_t a, std::uint32_t b) {
  for (std::uint32_t v : f)
    if (v != a && v != b) return v;
  return f[0];
}

bool has_directed(const Face& f, std::uint32_t a, std::uint32_t b) {
  for (std::size_t k = 0; k < 3; ++k)
    if (f[k] == a && f[(k + 1) % 3] == b) return true;
  return false;
}

void replace_face(std::unordered_map<std::uint64_t, EdgeFaces>& edges, std::uint64_t key,
                  int from, int to) {
  auto& slot = edges.at(key);
  if (slot[0] == from) {
    slot[0] = to;
  } else if (slot[1] == from) {
    slot[1] = to;
  }
}

}  // namespace

std::vector<Face> delaunay_flip(std::span<const Point2> points, std::vector<Face> faces) {
  std::unordered_map<std::uint64_t, EdgeFaces> edges;
  edges.reserve(faces.size() * 3);
  for (std::size_t t = 0; t < faces.size(); ++t) {
    for (std::size_t k = 0; k < 3; ++k) {
      auto [it, inserted] = edges.try_emplace(edge_key(faces[t][k], faces[t][(k + 1) % 3]),
                                              EdgeFaces{-1, -1});
      EdgeFaces& slot = it->second;
      (slot[0] < 0 ? slot[0] : slot[1]) = static_cast<int>(t);
    }
  }

  std::vector<std::uint64_t> stack;
  for (const auto& [key, slot] : edges)
    if (slot[1] >= 0) stack.push_back(key);
  std::sort(stack.begin(), stack.end());

  const std::size_t max_flips = 64 * faces.size() * faces.size() + 1024;
  std::size_t flips = 0;
  while (!stack.empty()) {
    const std::uint64_t key = stack.back();
    stack.pop_back();
    auto found = edges.find(key);
    if (found == edges.end() || found->second[1] < 0) continue;

    int t1 = found->second[0], t2 = found->second[1];
    std::uint32_t a = static_cast<std::uint32_t>(key >> 32);
    std::uint32_t b = static_cast<std::uint32_t>(key & 0xffffffffu);
    if (!has_directed(faces[t1], a, b)) std::swap(a, b);
    const std::uint32_t c = opposite(faces[t1], a, b);
    const std::uint32_t d = opposite(faces[t2], a, b);

    if (!in_circle(points[a], points[b], points[c], points[d])) continue;
    if (orient(points[a], points[d], points[c]) <= 0.0 ||
        orient(points[d], points[b], points[c]) <= 0.0) {
      continue;
    }
    if (++flips > max_flips) throw InvalidInputError("delaunay_flip: flip limit exceeded");

    faces[t1] = {a, d, c};
    faces[t2] = {d, b, c};
    edges.erase(found);
    edges[edge_key(c, d)] = {t1, t2};
    replace_face(edges, edge_key(a, d), t2, t1);
    replace_face(edges, edge_key(b, c), t1, t2);
    for (std::uint64_t k : {edge_key(a, d), edge_key(d, b), edge_key(b, c), edge_key(c, a)})
      stack.push_back(k);
  }
  return faces;
}

bool is_locally_delaunay(std::span<const Point2> points, std::span<const Face> faces) {
  std::unordered_map<std::uint64_t, EdgeFaces> edges;
  for (std::size_t t = 0; t < faces.size(); ++t) {
    for (std::size_t k = 0; k < 3; ++k) {
      auto [it, inserted] = edges.try_emplace(edge_key(faces[t][k], faces[t][(k + 1) % 3]),
                                              EdgeFaces{-1, -1});
      (it->second[0] < 0 ? it->second[0] : it->second[1]) = static_cast<int>(t);
    }
  }
  for (const auto& [key, slot] : edges) {
    if (slot[1] < 0) continue;
    std::uint32_t a = static_cast<std::uint32_t>(key >> 32);
    std::uint32_t b = static_cast<std::uint32_t>(key & 0xffffffffu);
    if (!has_directed(faces[slot[0]], a, b)) std::swap(a, b);
    const std::uint32_t c = opposite(faces[slot[0]], a, b);
    const std::uint32_t d = opposite(faces[slot[1]], a, b);
    if (in_circle(points[a], points[b], points[c], points[d])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Sphere

int theta_intervals(const SphereSpec& spec) {
  if (!(spec.radius > 0.0) || !(spec.edge_length > 0.0) ||
      !(spec.edge_length < std::numbers::pi * spec.radius) || !is_finite(spec.center)) {
    throw InvalidInputError("sphere spec requires 0 < edge length < pi * radius");
  }
  return static_cast<int>(std::floor(std::numbers::pi * spec.radius / spec.edge_length));
}

std::vector<SphericalAngle> sphere_vertices(const SphereSpec& spec) {
  using std::numbers::pi;
  const int n_theta = theta_intervals(spec);
  if (n_theta < 2) {
    throw InvalidInputError("sphere spec too coarse: " + std::to_string(n_theta) +
                            " theta interval(s)");
  }
  std::vector<SphericalAngle> out;
  out.push_back({0.0, pi});
  for (int i = 1; i < n_theta; ++i) {
    const double theta = i * pi / n_theta;
    const int n_phi =
        static_cast<int>(std::floor(2.0 * pi * spec.radius * std::sin(theta) / spec.edge_length));
    if (n_phi < 3) throw InvalidInputError("sphere spec too coarse: ring with fewer than 3 points");
    for (int j = 0; j < n_phi; ++j) out.push_back({theta, 2.0 * pi * j / n_phi});
  }
  out.push_back({pi, pi});
  return out;
}

namespace {

// Triangulates the band between two rows of parameter points sorted by phi.
void stitch_rows(std::span<const Point2> pts, const std::vector<std::uint32_t>& upper,
                 const std::vector<std::uint32_t>& lower, std::vector<Face>& faces) {
  std::size_t i = 0, j = 0;
  while (i + 1 < upper.size() || j + 1 < lower.size()) {
    const bool advance_upper =
        j + 1 >= lower.size() ||
        (i + 1 < upper.size() && pts[upper[i + 1]].v <= pts[lower[j + 1]].v);
    Face f = advance_upper ? Face{upper[i], upper[i + 1], lower[j]}
                           : Face{upper[i], lower[j + 1], lower[j]};
    if (orient(pts[f[0]], pts[f[1]], pts[f[2]]) < 0.0) std::swap(f[1], f[2]);
    faces.push_back(f);
    (advance_upper ? i : j) += 1;
  }
}

}  // namespace

IndexedMesh triangulate_sphere_indexed(const SphereSpec& spec) {
  using std::numbers::pi;
  const std::vector<SphericalAngle> angles = sphere_vertices(spec);

  IndexedMesh mesh;
  mesh.vertices.reserve(angles.size());
  for (const SphericalAngle& a : angles) {
    const double r = spec.radius;
    mesh.vertices.push_back(spec.center + Point3{r * std::sin(a.theta) * std::cos(a.phi),
                                                 r * std::sin(a.theta) * std::sin(a.phi),
                                                 r * std::cos(a.theta)});
  }

  // Parameter points: every vertex plus a phi = 2 pi copy of each ring's
  // phi = 0 point. param_to_vertex folds the copies back onto the seam.
  std::vector<Point2> params;
  std::vector<std::uint32_t> param_to_vertex;
  std::vector<std::vector<std::uint32_t>> rows;
  for (std::uint32_t v = 0; v < angles.size(); ++v) {
    const bool new_row = v == 0 || angles[v].theta != angles[v - 1].theta;
    if (new_row) {
      if (!rows.empty() && rows.back().size() > 1) {
        const std::uint32_t first = param_to_vertex[rows.back().front()];
        rows.back().push_back(static_cast<std::uint32_t>(params.size()));
        params.push_back({angles[first].theta, 2.0 * pi});
        param_to_vertex.push_back(first);
      }
      rows.emplace_back();
    }
    rows.back().push_back(static_cast<std::uint32_t>(params.size()));
    params.push_back({angles[v].theta, angles[v].phi});
    param_to_vertex.push_back(v);
  }

  std::vector<Face> faces;
  for (std::size_t r = 0; r + 1 < rows.size(); ++r) stitch_rows(params, rows[r], rows[r + 1], faces);
  faces = delaunay_flip(params, std::move(faces));

  mesh.faces.reserve(faces.size());
  for (const Face& f : faces) {
    Face g{param_to_vertex[f[0]], param_to_vertex[f[1]], param_to_vertex[f[2]]};
    const Triangle tri{mesh.vertices[g[0]], mesh.vertices[g[1]], mesh.vertices[g[2]]};
    if (dot(triangle_centroid(tri) - spec.center, triangle_normal(tri)) < 0.0) std::swap(g[1], g[2]);
    mesh.faces.push_back(g);
  }
  return mesh;
}

std::vector<Triangle> triangulate_sphere(const SphereSpec& spec) {
  return triangulate_sphere_indexed(spec).triangles();
}

std::vector<Triangle> translate_mesh(std::span<const Triangle> mesh, const Point3& offset) {
  std::vector<Triangle> out(mesh.begin(), mesh.end());
  for (Triangle& tri : out)
    for (Point3& p : tri) p += offset;
  return out;
}

Triangle plane_element(const Point3& m, double alpha, double side, int orientation) {
  const double sum = m.x + m.y + m.z;
  if (!(norm(m) > 0.0) || sum == 0.0) throw InvalidInputError("plane_element: zero normal");
  const Point3 mm = m / sum;
  const Point3 n = mm / norm(mm);

  std::size_t axis = 0;
  for (std::size_t a = 1; a < 3; ++a)
    if (std::abs(n[a]) < std::abs(n[axis])) axis = a;
  Point3 e;
  e[axis] = 1.0;
  Point3 u = cross(n, e);
  u = u / norm(u);
  const Point3 v = cross(n, u);

  const Point3 c{alpha, alpha, alpha};
  const double radius = side / std::sqrt(3.0);
  Triangle tri;
  for (int k = 0; k < 3; ++k) {
    const double ang = 2.0 * std::numbers::pi * k / 3.0;
    tri[k] = c + radius * (std::cos(ang) * u + std::sin(ang) * v);
  }
  if (orientation < 0) std::swap(tri[1], tri[2]);
  return tri;
}

}  // namespace f2v
