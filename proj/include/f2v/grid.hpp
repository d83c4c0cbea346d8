#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "f2v/geometry.hpp"
#include "f2v/volume.hpp"

namespace f2v {

struct CellIndex {
  std::size_t i = 0, j = 0, k = 0;
  friend constexpr bool operator==(const CellIndex&, const CellIndex&) = default;
};

// Axis-aligned grid of uniform cubic cells.
class CartesianGrid {
 public:
  CartesianGrid(const Point3& origin, double cell_size, std::array<std::size_t, 3> counts);

  // Throws InvalidInputError unless the box divides into cubic cells
  // (relative mismatch below 1e-9).
  static CartesianGrid from_domain(const Point3& lo, const Point3& hi,
                                   std::array<std::size_t, 3> counts);

  const Point3& origin() const { return origin_; }
  double cell_size() const { return cell_size_; }
  const std::array<std::size_t, 3>& counts() const { return counts_; }
  std::size_t cell_count() const { return counts_[0] * counts_[1] * counts_[2]; }

  // k varies fastest.
  std::size_t linear(const CellIndex& c) const {
    return (c.i * counts_[1] + c.j) * counts_[2] + c.k;
  }
  CellIndex unravel(std::size_t n) const;
  Point3 cell_origin(const CellIndex& c) const;
  Point3 upper_corner() const;

 private:
  Point3 origin_;
  double cell_size_;
  std::array<std::size_t, 3> counts_;
};

class FractionField {
 public:
  explicit FractionField(CartesianGrid grid, double fill = 0.0)
      : grid_(grid), values_(grid.cell_count(), fill) {}

  const CartesianGrid& grid() const { return grid_; }
  double at(const CellIndex& c) const { return values_[grid_.linear(c)]; }
  double& at(const CellIndex& c) { return values_[grid_.linear(c)]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  // Sum of fraction * cell volume.
  double total_volume() const;

 private:
  CartesianGrid grid_;
  std::vector<double> values_;
};

// Triangle indices per cell, over the grid plus a one-cell ghost layer so
// halo searches at the domain boundary see nearby triangles. Bins are in
// ascending triangle order.
class TriangleBins {
 public:
  TriangleBins(std::span<const Triangle> mesh, const CartesianGrid& grid);

  // Signed indices in [-1, n] along each axis.
  std::span<const std::uint32_t> at(long i, long j, long k) const;
  std::span<const std::uint32_t> at(const CellIndex& c) const {
    return at(static_cast<long>(c.i), static_cast<long>(c.j), static_cast<long>(c.k));
  }
  // Triangles touching no grid cell (ghost layer excluded).
  std::size_t outside() const { return outside_; }

 private:
  std::array<long, 3> dims_{};
  std::vector<std::vector<std::uint32_t>> bins_;
  std::size_t outside_ = 0;
};

// Conservative binning: a triangle lands in every cell its bounding box
// overlaps, including boxes that merely touch a cell boundary.
TriangleBins bin_triangles(std::span<const Triangle> mesh, const CartesianGrid& grid);

// (X - cell origin) / cell size.
Triangle to_local(const Triangle& tri, const CellIndex& cell, const CartesianGrid& grid);

// Throws InvalidInputError for non-finite coordinates or triangles with
// coincident or collinear vertices, naming the triangle index.
void validate_mesh(std::span<const Triangle> mesh);

struct FieldOptions {
  int default_phase = 0;  // used only when the mesh is empty
  unsigned threads = 1;
};

struct FieldStats {
  std::size_t interface_cells = 0;
  std::size_t full_cells = 0;     // classified from a nearby triangle
  std::size_t empty_cells = 0;
  std::size_t flood_filled = 0;   // copied from an adjacent classified region
  std::size_t far_classified = 0; // region with no classified neighbour
  std::size_t default_filled = 0; // empty mesh
  std::size_t triangles_outside = 0;
  std::size_t zero_length_edges = 0;
  VolumeDiagnostics volume;
};

struct FieldResult {
  FractionField field;
  FieldStats stats;
};

// Volume fraction of the reference phase in every cell.
//
// Cells cut by at least one clipped polygon get cell_volume_fraction. Other
// cells with triangles in their 3x3x3 neighbourhood are classified full or
// empty by classify_by_closest_triangle at the cell center over those
// triangles. The remaining cells form face-connected regions that take the
// value of their classified neighbours; a region touching both values throws
// InconsistentMeshError. A region with no classified neighbour is classified
// the same way over the whole mesh, or set to default_phase when the mesh is
// empty.
//
// Cells are processed independently across threads; the result does not
// depend on the thread count.
FieldResult compute_fraction_field(std::span<const Triangle> mesh, const CartesianGrid& grid,
                                   const FieldOptions& opts = {});

}  // namespace f2v
