#include "f2v/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <string>
#include <thread>

#include "f2v/errors.hpp"

namespace f2v {

CartesianGrid::CartesianGrid(const Point3& origin, double cell_size,
                             std::array<std::size_t, 3> counts)
    : origin_(origin), cell_size_(cell_size), counts_(counts) {
  if (!is_finite(origin)) throw InvalidInputError("grid origin must be finite");
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw InvalidInputError("grid cell size must be positive");
  }
  for (std::size_t n : counts) {
    if (n == 0) throw InvalidInputError("grid counts must be positive");
  }
}

CartesianGrid CartesianGrid::from_domain(const Point3& lo, const Point3& hi,
                                         std::array<std::size_t, 3> counts) {
  for (std::size_t n : counts) {
    if (n == 0) throw InvalidInputError("grid counts must be positive");
  }
  std::array<double, 3> h{};
  for (std::size_t a = 0; a < 3; ++a) {
    if (!(hi[a] > lo[a])) throw InvalidInputError("domain upper corner must exceed lower corner");
    h[a] = (hi[a] - lo[a]) / static_cast<double>(counts[a]);
  }
  for (std::size_t a = 1; a < 3; ++a) {
    if (std::abs(h[a] - h[0]) > 1e-9 * h[0]) {
      throw InvalidInputError("domain and counts must give cubic cells");
    }
  }
  return CartesianGrid(lo, h[0], counts);
}

CellIndex CartesianGrid::unravel(std::size_t n) const {
  CellIndex c;
  c.k = n % counts_[2];
  n /= counts_[2];
  c.j = n % counts_[1];
  c.i = n / counts_[1];
  return c;
}

Point3 CartesianGrid::cell_origin(const CellIndex& c) const {
  return {origin_.x + static_cast<double>(c.i) * cell_size_,
          origin_.y + static_cast<double>(c.j) * cell_size_,
          origin_.z + static_cast<double>(c.k) * cell_size_};
}

Point3 CartesianGrid::upper_corner() const {
  return cell_origin(CellIndex{counts_[0], counts_[1], counts_[2]});
}

double FractionField::total_volume() const {
  const double h = grid_.cell_size();
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum * h * h * h;
}

// ---------------------------------------------------------------------------

namespace {

// Widening of each bounding box, in cells; clipping discards false hits.
constexpr double kBinSlack = 1e-10;

}  // namespace

TriangleBins::TriangleBins(std::span<const Triangle> mesh, const CartesianGrid& grid) {
  for (std::size_t a = 0; a < 3; ++a) dims_[a] = static_cast<long>(grid.counts()[a]) + 2;
  bins_.resize(static_cast<std::size_t>(dims_[0] * dims_[1] * dims_[2]));

  const double inv_h = 1.0 / grid.cell_size();
  for (std::size_t t = 0; t < mesh.size(); ++t) {
    std::array<long, 3> lo{}, hi{};
    bool touches_grid = true;
    bool touches_any = true;
    for (std::size_t a = 0; a < 3; ++a) {
      double mn = mesh[t][0][a], mx = mn;
      for (const Point3& p : mesh[t]) {
        mn = std::min(mn, p[a]);
        mx = std::max(mx, p[a]);
      }
      const double n = static_cast<double>(grid.counts()[a]);
      const double tmin = std::floor((mn - grid.origin()[a]) * inv_h - kBinSlack);
      const double tmax = std::floor((mx - grid.origin()[a]) * inv_h + kBinSlack);
      if (tmax < 0.0 || tmin > n - 1.0) touches_grid = false;
      if (tmax < -1.0 || tmin > n) {
        touches_any = false;
        break;
      }
      lo[a] = static_cast<long>(std::max(tmin, -1.0));
      hi[a] = static_cast<long>(std::min(tmax, n));
    }
    if (!touches_grid) ++outside_;
    if (!touches_any) continue;
    for (long i = lo[0]; i <= hi[0]; ++i)
      for (long j = lo[1]; j <= hi[1]; ++j)
        for (long k = lo[2]; k <= hi[2]; ++k) {
          const auto idx = static_cast<std::size_t>(((i + 1) * dims_[1] + (j + 1)) * dims_[2] + (k + 1));
          bins_[idx].push_back(static_cast<std::uint32_t>(t));
        }
  }
}

std::span<const std::uint32_t> TriangleBins::at(long i, long j, long k) const {
  if (i < -1 || j < -1 || k < -1 || i > dims_[0] - 2 || j > dims_[1] - 2 || k > dims_[2] - 2) {
    return {};
  }
  return bins_[static_cast<std::size_t>(((i + 1) * dims_[1] + (j + 1)) * dims_[2] + (k + 1))];
}

TriangleBins bin_triangles(std::span<const Triangle> mesh, const CartesianGrid& grid) {
  return TriangleBins(mesh, grid);
}

Triangle to_local(const Triangle& tri, const CellIndex& cell, const CartesianGrid& grid) {
  const Point3 o = grid.cell_origin(cell);
  const double h = grid.cell_size();
  return {(tri[0] - o) / h, (tri[1] - o) / h, (tri[2] - o) / h};
}

void validate_mesh(std::span<const Triangle> mesh) {
  for (std::size_t t = 0; t < mesh.size(); ++t) {
    const Triangle& tri = mesh[t];
    for (const Point3& p : tri) {
      if (!is_finite(p)) {
        throw InvalidInputError("triangle " + std::to_string(t) + " has a non-finite coordinate");
      }
    }
    double longest = 0.0;
    for (std::size_t k = 0; k < 3; ++k) longest = std::max(longest, norm(tri[(k + 1) % 3] - tri[k]));
    if (!(norm(triangle_normal(tri)) > 1e-14 * longest * longest)) {
      throw InvalidInputError("triangle " + std::to_string(t) + " is degenerate");
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

enum class State : std::uint8_t { Interface, Full, Empty, Pending };

// Every triangle within this distance of a cell center lies in its 3x3x3 halo.
constexpr double kHaloReach = 1.5;

std::string describe(const CellIndex& c) {
  return "(" + std::to_string(c.i) + "," + std::to_string(c.j) + "," + std::to_string(c.k) + ")";
}

std::vector<Triangle> gather_local(std::span<const Triangle> mesh,
                                   std::span<const std::uint32_t> ids, const CellIndex& cell,
                                   const CartesianGrid& grid) {
  std::vector<Triangle> out;
  out.reserve(ids.size());
  for (std::uint32_t t : ids) out.push_back(to_local(mesh[t], cell, grid));
  return out;
}

std::vector<std::uint32_t> halo_triangles(const TriangleBins& bins, const CellIndex& c) {
  std::vector<std::uint32_t> ids;
  const long ci = static_cast<long>(c.i), cj = static_cast<long>(c.j), ck = static_cast<long>(c.k);
  for (long di = -1; di <= 1; ++di)
    for (long dj = -1; dj <= 1; ++dj)
      for (long dk = -1; dk <= 1; ++dk) {
        auto b = bins.at(ci + di, cj + dj, ck + dk);
        ids.insert(ids.end(), b.begin(), b.end());
      }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

void evaluate_range(std::span<const Triangle> mesh, const CartesianGrid& grid,
                    const TriangleBins& bins, std::size_t begin, std::size_t end,
                    std::vector<double>& values, std::vector<State>& states, FieldStats& stats) {
  const Point3 center{0.5, 0.5, 0.5};
  for (std::size_t n = begin; n < end; ++n) {
    const CellIndex c = grid.unravel(n);
    const auto own = bins.at(c);
    if (!own.empty()) {
      const std::vector<Triangle> local = gather_local(mesh, own, c, grid);
      ClippedCell clipped = clip_cell(local);
      stats.zero_length_edges += clipped.zero_length_edges;
      if (clipped.has_cutting_polygon) {
        values[n] = cell_volume_fraction(clipped.polygons, &stats.volume);
        states[n] = State::Interface;
        ++stats.interface_cells;
        continue;
      }
    }
    const std::vector<std::uint32_t> halo = halo_triangles(bins, c);
    if (halo.empty()) {
      states[n] = State::Pending;
      continue;
    }
    const std::vector<Triangle> local = gather_local(mesh, halo, c, grid);
    std::optional<double> side;
    try {
      side = classify_by_closest_triangle(local, center, kHaloReach);
    } catch (const ClassificationError& e) {
      throw ClassificationError(std::string(e.what()) + " in cell " + describe(c));
    }
    if (!side) {
      states[n] = State::Pending;
      continue;
    }
    values[n] = *side;
    if (values[n] > 0.5) {
      states[n] = State::Full;
      ++stats.full_cells;
    } else {
      states[n] = State::Empty;
      ++stats.empty_cells;
    }
  }
}

void merge(FieldStats& into, const FieldStats& s) {
  into.interface_cells += s.interface_cells;
  into.full_cells += s.full_cells;
  into.empty_cells += s.empty_cells;
  into.zero_length_edges += s.zero_length_edges;
  into.volume += s.volume;
}

}  // namespace

FieldResult compute_fraction_field(std::span<const Triangle> mesh, const CartesianGrid& grid,
                                   const FieldOptions& opts) {
  if (opts.default_phase != 0 && opts.default_phase != 1) {
    throw InvalidInputError("default phase must be 0 or 1");
  }
  validate_mesh(mesh);

  FieldResult result{FractionField(grid), FieldStats{}};
  const TriangleBins bins = bin_triangles(mesh, grid);
  result.stats.triangles_outside = bins.outside();

  const std::size_t cells = grid.cell_count();
  std::vector<double> values(cells, 0.0);
  std::vector<State> states(cells, State::Pending);

  const unsigned threads = static_cast<unsigned>(
      std::clamp<std::size_t>(std::max(1u, opts.threads), 1, std::max<std::size_t>(cells, 1)));
  std::vector<FieldStats> partial(threads);
  if (threads == 1) {
    evaluate_range(mesh, grid, bins, 0, cells, values, states, partial[0]);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          evaluate_range(mesh, grid, bins, cells * t / threads, cells * (t + 1) / threads, values,
                         states, partial[t]);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  for (const FieldStats& s : partial) merge(result.stats, s);

  // Flood fill the cells with no triangle in their neighbourhood.
  const auto& n = grid.counts();
  std::vector<char> visited(cells, 0);
  std::vector<std::size_t> region;
  std::deque<std::size_t> queue;
  for (std::size_t start = 0; start < cells; ++start) {
    if (states[start] != State::Pending || visited[start]) continue;
    region.clear();
    queue.assign(1, start);
    visited[start] = 1;
    bool saw_full = false, saw_empty = false;
    CellIndex full_seed{}, empty_seed{};
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      region.push_back(cur);
      const CellIndex c = grid.unravel(cur);
      const std::array<long, 3> at{static_cast<long>(c.i), static_cast<long>(c.j),
                                   static_cast<long>(c.k)};
      for (std::size_t axis = 0; axis < 3; ++axis) {
        for (long step : {-1L, 1L}) {
          std::array<long, 3> nb = at;
          nb[axis] += step;
          if (nb[axis] < 0 || nb[axis] >= static_cast<long>(n[axis])) continue;
          const CellIndex nc{static_cast<std::size_t>(nb[0]), static_cast<std::size_t>(nb[1]),
                             static_cast<std::size_t>(nb[2])};
          const std::size_t m = grid.linear(nc);
          if (states[m] == State::Pending) {
            if (!visited[m]) {
              visited[m] = 1;
              queue.push_back(m);
            }
          } else if (states[m] == State::Full && !saw_full) {
            saw_full = true;
            full_seed = nc;
          } else if (states[m] == State::Empty && !saw_empty) {
            saw_empty = true;
            empty_seed = nc;
          }
        }
      }
    }

    if (saw_full && saw_empty) {
      throw InconsistentMeshError("bulk region adjacent to full cell " + describe(full_seed) +
                                  " and empty cell " + describe(empty_seed));
    }
    double fill = 0.0;
    if (saw_full || saw_empty) {
      fill = saw_full ? 1.0 : 0.0;
      result.stats.flood_filled += region.size();
    } else if (!mesh.empty()) {
      const CellIndex c = grid.unravel(region.front());
      std::vector<Triangle> local;
      local.reserve(mesh.size());
      for (const Triangle& tri : mesh) local.push_back(to_local(tri, c, grid));
      fill = *classify_by_closest_triangle(local, Point3{0.5, 0.5, 0.5});
      result.stats.far_classified += region.size();
    } else {
      fill = static_cast<double>(opts.default_phase);
      result.stats.default_filled += region.size();
    }
    for (std::size_t m : region) values[m] = fill;
  }

  std::copy(values.begin(), values.end(), result.field.values().begin());
  return result;
}

}  // namespace f2v
