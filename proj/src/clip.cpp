#include "f2v/clip.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace f2v {

void flag_vertices_in_place(Polygon& poly) {
  for (Vertex& v : poly.vertices) {
    v.mask = FaceMask{};
    for (std::size_t axis = 0; axis < 3; ++axis) {
      if (std::abs(v.pos[axis]) < kSnapEpsilon) {
        v.mask.set(min_face(axis));
        v.pos[axis] = 0.0;
      } else if (std::abs(v.pos[axis] - 1.0) < kSnapEpsilon) {
        v.mask.set(max_face(axis));
        v.pos[axis] = 1.0;
      }
    }
  }
}

Polygon flag_vertices(Polygon poly) {
  flag_vertices_in_place(poly);
  return poly;
}

std::optional<double> line_plane_alpha(double x1, double x2, double xp) {
  const double t = x2 - x1;
  if (t == 0.0) return std::nullopt;
  const double alpha = (xp - x1) / t;
  if (alpha > 0.0 && alpha < 1.0) return alpha;
  return std::nullopt;
}

namespace {

Vertex interpolate(const Vertex& a, const Vertex& b, double alpha, std::size_t axis,
                   double plane) {
  Vertex v;
  v.pos = a.pos + alpha * (b.pos - a.pos);
  v.pos[axis] = plane;
  v.rm = false;
  return v;
}

std::size_t drop_repeated_vertices(std::vector<Vertex>& verts) {
  std::size_t removed = 0;
  std::vector<Vertex> kept;
  kept.reserve(verts.size());
  for (const Vertex& v : verts) {
    if (!kept.empty() && kept.back().pos == v.pos) {
      ++removed;
      continue;
    }
    kept.push_back(v);
  }
  while (kept.size() > 1 && kept.back().pos == kept.front().pos) {
    kept.pop_back();
    ++removed;
  }
  verts = std::move(kept);
  return removed;
}

}  // namespace

ClipResult clip_triangle(const Triangle& tri) {
  ClipResult result;
  Polygon poly(tri);
  flag_vertices_in_place(poly);

  std::vector<Vertex> next;
  next.reserve(16);

  for (std::size_t axis = 0; axis < 3; ++axis) {
    // poly.vertices is the snapshot whose edges are cut; output goes to next.
    std::vector<Vertex>& snapshot = poly.vertices;
    for (Vertex& v : snapshot) {
      v.rm = v.pos[axis] > 1.0 || v.pos[axis] < 0.0;
    }

    next.clear();
    const std::size_t n = snapshot.size();
    for (std::size_t j = 0; j < n; ++j) {
      const Vertex& a = snapshot[j];
      const Vertex& b = snapshot[(j + 1) % n];
      next.push_back(a);

      const auto lo = line_plane_alpha(a.pos[axis], b.pos[axis], 0.0);
      const auto hi = line_plane_alpha(a.pos[axis], b.pos[axis], 1.0);
      if (lo && hi) {
        if (*lo < *hi) {
          next.push_back(interpolate(a, b, *lo, axis, 0.0));
          next.push_back(interpolate(a, b, *hi, axis, 1.0));
        } else {
          next.push_back(interpolate(a, b, *hi, axis, 1.0));
          next.push_back(interpolate(a, b, *lo, axis, 0.0));
        }
      } else if (lo) {
        next.push_back(interpolate(a, b, *lo, axis, 0.0));
      } else if (hi) {
        next.push_back(interpolate(a, b, *hi, axis, 1.0));
      }
    }

    snapshot.clear();
    for (const Vertex& v : next) {
      if (!v.rm) snapshot.push_back(v);
    }
    flag_vertices_in_place(poly);
    result.zero_length_edges += drop_repeated_vertices(poly.vertices);
    if (poly.size() < 3) return result;
  }

  result.polygon = std::move(poly);
  return result;
}

}  // namespace f2v
