#include "f2v/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "f2v/errors.hpp"

namespace f2v {

double plane_cube_volume(const Point3& m, double alpha) {
  if (m.x < 0.0 || m.y < 0.0 || m.z < 0.0) {
    throw InvalidInputError("plane_cube_volume: normal components must be non-negative");
  }
  const double sum = m.x + m.y + m.z;
  if (!(sum > 0.0)) throw InvalidInputError("plane_cube_volume: zero normal");

  const double a = alpha / sum;
  if (a <= 0.0) return 0.0;
  if (a >= 1.0) return 1.0;

  double b[3] = {m.x / sum, m.y / sum, m.z / sum};
  std::sort(b, b + 3);
  const double b1 = b[0], b2 = b[1], b3 = b[2];
  const double b12 = b1 + b2;

  // V(a) = 1 - V(1 - a) by point reflection through the cube center.
  const double a0 = std::min(a, 1.0 - a);
  double v = 0.0;
  if (a0 < b1) {
    v = a0 * a0 * a0 / (6.0 * b1 * b2 * b3);
  } else if (a0 < b2) {
    v = 0.5 * a0 * (a0 - b1) / (b2 * b3) + b1 * b1 / (6.0 * b2 * b3);
  } else if (a0 < std::min(b12, b3)) {
    v = (a0 * a0 * (3.0 * b12 - a0) + b1 * b1 * (b1 - 3.0 * a0) + b2 * b2 * (b2 - 3.0 * a0)) /
        (6.0 * b1 * b2 * b3);
  } else if (b12 <= b3) {
    v = (a0 - 0.5 * b12) / b3;
  } else {
    v = (a0 * a0 * (3.0 - 2.0 * a0) + b1 * b1 * (b1 - 3.0 * a0) + b2 * b2 * (b2 - 3.0 * a0) +
         b3 * b3 * (b3 - 3.0 * a0)) /
        (6.0 * b1 * b2 * b3);
  }
  const double volume = a <= 0.5 ? v : 1.0 - v;
  return std::clamp(volume, 0.0, 1.0);
}

double mesh_polyhedron_volume(std::span<const Triangle> mesh) {
  double volume = 0.0;
  for (const Triangle& tri : mesh) {
    // area * n_x = |N|/2 * N_x/|N|
    volume += 0.5 * triangle_normal(tri).x * triangle_centroid(tri).x;
  }
  return volume;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kGrazeTolerance = 1e-12;
constexpr std::size_t kMaxBinsPerAxis = 256;

enum class Crossing { None, Hit, Ambiguous };

Crossing intersect(const Triangle& tri, const Point3& origin, const Point3& dir) {
  const Point3 e1 = tri[1] - tri[0];
  const Point3 e2 = tri[2] - tri[0];
  const Point3 p = cross(dir, e2);
  const double det = dot(e1, p);
  if (det == 0.0) return Crossing::None;
  const double inv = 1.0 / det;
  const Point3 s = origin - tri[0];
  const double u = dot(s, p) * inv;
  if (u < -kGrazeTolerance || u > 1.0 + kGrazeTolerance) return Crossing::None;
  const Point3 q = cross(s, e1);
  const double v = dot(dir, q) * inv;
  if (v < -kGrazeTolerance || u + v > 1.0 + kGrazeTolerance) return Crossing::None;
  const double t = dot(e2, q) * inv;
  if (t < -kGrazeTolerance) return Crossing::None;
  const double w = 1.0 - u - v;
  if (u < kGrazeTolerance || v < kGrazeTolerance || w < kGrazeTolerance || t < kGrazeTolerance) {
    return Crossing::Ambiguous;
  }
  return Crossing::Hit;
}

struct Bounds {
  Point3 lo{INFINITY, INFINITY, INFINITY};
  Point3 hi{-INFINITY, -INFINITY, -INFINITY};
  void add(const Point3& p) {
    for (std::size_t a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
};

// Uniform draw in [0, 1) from the top 53 bits.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ParityRayCaster::ParityRayCaster(std::span<const Triangle> mesh) : mesh_(mesh) {
  if (mesh.empty()) return;
  Bounds all;
  for (const Triangle& t : mesh)
    for (const Point3& p : t) all.add(p);

  // Once inside the x range of the mesh a ray drifts at most this far in y
  // and z; queries are made at the entry point into that range.
  const double extent = std::max({all.hi.x - all.lo.x, all.hi.y - all.lo.y, all.hi.z - all.lo.z});
  const double drift = (std::max(kDirection.y, kDirection.z) / kDirection.x) * (all.hi.x - all.lo.x) +
                       1e-9 * extent + 1e-300;
  x_lo_ = all.lo.x;
  x_hi_ = all.hi.x;

  const std::size_t per_axis = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::sqrt(static_cast<double>(mesh.size()))), 1, kMaxBinsPerAxis);
  y0_ = all.lo.y - drift;
  z0_ = all.lo.z - drift;
  const double span = std::max(all.hi.y - all.lo.y, all.hi.z - all.lo.z) + 2.0 * drift;
  inv_cell_ = static_cast<double>(per_axis) / span;
  ny_ = nz_ = per_axis;
  bins_.assign(ny_ * nz_, {});

  auto to_bin = [](double v, std::size_t n) {
    const double c = std::floor(v);
    if (c < 0.0) return std::size_t{0};
    return std::min(static_cast<std::size_t>(c), n - 1);
  };
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    Bounds b;
    for (const Point3& p : mesh[i]) b.add(p);
    const std::size_t ylo = to_bin((b.lo.y - drift - y0_) * inv_cell_, ny_);
    const std::size_t yhi = to_bin((b.hi.y + drift - y0_) * inv_cell_, ny_);
    const std::size_t zlo = to_bin((b.lo.z - drift - z0_) * inv_cell_, nz_);
    const std::size_t zhi = to_bin((b.hi.z + drift - z0_) * inv_cell_, nz_);
    for (std::size_t iy = ylo; iy <= yhi; ++iy)
      for (std::size_t iz = zlo; iz <= zhi; ++iz)
        bins_[iy * nz_ + iz].push_back(static_cast<std::uint32_t>(i));
  }
}

ParityRayCaster::Hit ParityRayCaster::classify(const Point3& p) const {
  if (bins_.empty() || p.x > x_hi_) return Hit::Outside;
  const double run = std::max(0.0, x_lo_ - p.x) / kDirection.x;
  const double fy = std::floor((p.y + run * kDirection.y - y0_) * inv_cell_);
  const double fz = std::floor((p.z + run * kDirection.z - z0_) * inv_cell_);
  if (fy < 0.0 || fz < 0.0 || fy >= static_cast<double>(ny_) || fz >= static_cast<double>(nz_)) {
    return Hit::Outside;
  }
  const auto& bin = bins_[static_cast<std::size_t>(fy) * nz_ + static_cast<std::size_t>(fz)];
  bool inside = false;
  for (std::uint32_t i : bin) {
    switch (intersect(mesh_[i], p, kDirection)) {
      case Crossing::Hit: inside = !inside; break;
      case Crossing::Ambiguous: return Hit::Ambiguous;
      case Crossing::None: break;
    }
  }
  return inside ? Hit::Inside : Hit::Outside;
}

ParityRayCaster::Hit ParityRayCaster::classify(const Point3& p, const Point3& direction) const {
  bool inside = false;
  for (const Triangle& tri : mesh_) {
    switch (intersect(tri, p, direction)) {
      case Crossing::Hit: inside = !inside; break;
      case Crossing::Ambiguous: return Hit::Ambiguous;
      case Crossing::None: break;
    }
  }
  return inside ? Hit::Inside : Hit::Outside;
}

McEstimate monte_carlo_fraction(std::span<const Triangle> mesh, const AxisCube& cell,
                                std::size_t n, std::uint64_t seed, McOptions opts) {
  if (n == 0) throw InvalidInputError("monte_carlo_fraction: zero samples");
  const std::size_t shards = std::max<std::size_t>(opts.shards, 1);
  const ParityRayCaster caster(mesh);

  std::vector<std::size_t> hits(shards, 0), resampled(shards, 0);
  auto run_shard = [&](std::size_t s) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(seq);
    const std::size_t count = n / shards + (s < n % shards ? 1 : 0);
    for (std::size_t k = 0; k < count; ++k) {
      const Point3 p{cell.origin.x + cell.size * unit_draw(rng),
                     cell.origin.y + cell.size * unit_draw(rng),
                     cell.origin.z + cell.size * unit_draw(rng)};
      auto hit = caster.classify(p);
      // A point on the surface itself stays ambiguous; it has measure zero.
      for (int tries = 0; hit == ParityRayCaster::Hit::Ambiguous && tries < 16; ++tries) {
        ++resampled[s];
        const Point3 dir{1.0, 2e-3 * (unit_draw(rng) - 0.5), 2e-3 * (unit_draw(rng) - 0.5)};
        hit = caster.classify(p, dir);
      }
      if (hit == ParityRayCaster::Hit::Inside) ++hits[s];
    }
  };

  const unsigned threads = std::max(1u, opts.threads);
  if (threads == 1) {
    for (std::size_t s = 0; s < shards; ++s) run_shard(s);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t s = t; s < shards; s += threads) run_shard(s);
      });
    }
    for (auto& th : pool) th.join();
  }

  McEstimate out;
  std::size_t total = 0;
  for (std::size_t s = 0; s < shards; ++s) {
    total += hits[s];
    out.resampled += resampled[s];
  }
  const double nd = static_cast<double>(n);
  out.estimate = static_cast<double>(total) / nd;
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / nd);
  return out;
}

}  // namespace f2v
