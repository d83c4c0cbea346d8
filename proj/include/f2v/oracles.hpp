#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "f2v/geometry.hpp"

namespace f2v {

// Volume of {X in [0,1]^3 : m . X <= alpha} for a normal with non-negative
// components (normalized internally so they sum to 1, alpha scaled
// accordingly). Alpha outside [0, sum(m)] clamps to 0 or 1.
//
// Piecewise cubic closed form over the ordered components b1 <= b2 <= b3,
// evaluated on the half alpha <= 1/2 and mirrored. Accuracy degrades when
// the smallest non-zero component is many orders of magnitude below the
// others; exact zeros are handled by the lower-dimensional branches.
double plane_cube_volume(const Point3& m, double alpha);

// Divergence-theorem volume of a closed, outward-oriented triangle mesh.
double mesh_polyhedron_volume(std::span<const Triangle> mesh);

struct AxisCube {
  Point3 origin;
  double size = 1.0;
};

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t resampled = 0;  // points whose ray grazed an edge
};

struct McOptions {
  std::size_t shards = 16;
  unsigned threads = 1;
};

// Fraction of n uniform samples in the cube that lie inside the closed mesh,
// by ray-crossing parity. Each shard draws from its own generator seeded by
// (seed, shard index); (seed, n, shards) fixes the result bit-exactly for any
// thread count.
McEstimate monte_carlo_fraction(std::span<const Triangle> mesh, const AxisCube& cell,
                                std::size_t n, std::uint64_t seed, McOptions opts = {});

// Parity point-in-mesh test along a fixed, slightly tilted +x ray. Grid
// accelerated over the (y, z) footprint of the triangles.
class ParityRayCaster {
 public:
  explicit ParityRayCaster(std::span<const Triangle> mesh);

  enum class Hit { Inside, Outside, Ambiguous };

  Hit classify(const Point3& p) const;
  // Brute force over every triangle with an arbitrary direction.
  Hit classify(const Point3& p, const Point3& direction) const;

  static constexpr Point3 kDirection{1.0, 3e-7, 7e-7};

 private:
  std::span<const Triangle> mesh_;
  double x_lo_ = 0.0, x_hi_ = 0.0;
  double y0_ = 0.0, z0_ = 0.0, inv_cell_ = 1.0;
  std::size_t ny_ = 0, nz_ = 0;
  std::vector<std::vector<std::uint32_t>> bins_;
};

}  // namespace f2v
