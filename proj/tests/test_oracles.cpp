#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "f2v/errors.hpp"
#include "f2v/meshgen.hpp"
#include "f2v/oracles.hpp"
#include "support/reference.hpp"

using namespace f2v;
using doctest::Approx;

TEST_CASE("quadrature oracle sanity") {
  // Independent of plane_cube_volume: simple solids with known volume.
  CHECK(testing::halfspace_cube_volume({1, 0, 0}, 0.3) == Approx(0.3).epsilon(1e-15));
  CHECK(testing::halfspace_cube_volume({1, 1, 1}, 1) == Approx(1.0 / 6).epsilon(1e-15));
  CHECK(testing::halfspace_cube_volume({1, 1, 1}, 2) == Approx(5.0 / 6).epsilon(1e-15));
  CHECK(testing::halfspace_cube_volume({-1, 0, 0}, -0.25) == Approx(0.75).epsilon(1e-15));
  CHECK(testing::halfspace_cube_volume({1, 1, 0}, 0.5) == Approx(0.125).epsilon(1e-15));
}

TEST_CASE("plane_cube_volume examples") {
  CHECK(plane_cube_volume({1, 0, 0}, 0.3) == Approx(0.3).epsilon(1e-15));
  CHECK(plane_cube_volume({1.0 / 3, 1.0 / 3, 1.0 / 3}, 1.0 / 3) == Approx(1.0 / 6).epsilon(1e-15));
  CHECK(plane_cube_volume({0.5, 0.5, 0}, 0.25) == Approx(0.125).epsilon(1e-15));
  CHECK(plane_cube_volume({0, 0.5, 0.5}, 0.5) == Approx(0.5).epsilon(1e-15));
  CHECK(plane_cube_volume({1, 0, 0}, -0.1) == 0.0);
  CHECK(plane_cube_volume({1, 0, 0}, 1.1) == 1.0);
  // Unnormalized input is scaled.
  CHECK(plane_cube_volume({3, 3, 3}, 1) == Approx(1.0 / 162).epsilon(1e-15));
  CHECK_THROWS_AS(plane_cube_volume({-1, 1, 1}, 0.5), InvalidInputError);
  CHECK_THROWS_AS(plane_cube_volume({0, 0, 0}, 0.5), InvalidInputError);
}

TEST_CASE("plane_cube_volume against quadrature") {
  testing::Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    Point3 m{rng.uniform(), rng.uniform(), rng.uniform()};
    if (rng.chance(0.15)) m[rng.below(3)] = 0.0;
    if (rng.chance(0.1)) m = {1, 1, 1};
    if (rng.chance(0.1)) m[rng.below(3)] = m[rng.below(3)];  // repeated component
    const double s = m.x + m.y + m.z;
    if (s < 1e-3) continue;
    m = m / s;
    // Keep the smallest non-zero component away from the ill-conditioned range.
    bool tiny = false;
    for (std::size_t a = 0; a < 3; ++a) tiny = tiny || (m[a] > 0 && m[a] < 1e-4);
    if (tiny) continue;
    const double alpha = rng.chance(0.1) ? m[rng.below(3)] : rng.uniform(-0.05, 1.05);
    const double v = plane_cube_volume(m, alpha);
    INFO("m=(", m.x, ",", m.y, ",", m.z, ") alpha=", alpha);
    CHECK(std::abs(v - testing::halfspace_cube_volume(m, alpha)) < 1e-12);
    // Complement: the reflected cube X -> 1 - X swaps the two sides.
    CHECK(std::abs(v + plane_cube_volume(m, 1.0 - alpha) - 1.0) < 1e-12);
  }
}

TEST_CASE("plane_cube_volume is monotone in alpha") {
  for (const Point3& m : {Point3{1, 0, 0}, Point3{0.5, 0.5, 0}, Point3{0.2, 0.3, 0.5}, Point3{0.1, 0.1, 0.8}}) {
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double v = plane_cube_volume(m, i / 1000.0);
      CHECK(v >= prev - 1e-15);
      prev = v;
    }
    CHECK(prev == Approx(1.0));
  }
}

TEST_CASE("mesh_polyhedron_volume") {
  const auto cube = testing::box_mesh({0, 0, 0}, {1, 1, 1});
  REQUIRE(cube.size() == 12);
  CHECK(mesh_polyhedron_volume(cube) == Approx(1.0).epsilon(1e-15));
  CHECK(mesh_polyhedron_volume(translate_mesh(cube, {3.5, -2, 7})) == Approx(1.0).epsilon(1e-14));

  const auto box = testing::box_mesh({0.1, 0.2, 0.3}, {0.6, 0.9, 0.4});
  CHECK(mesh_polyhedron_volume(box) == Approx(0.5 * 0.7 * 0.1).epsilon(1e-14));

  auto sphere = triangulate_sphere({{0, 0, 0}, 0.2, 0.0125});
  const double exact = 4.0 / 3.0 * std::numbers::pi * 0.008;
  const double v = mesh_polyhedron_volume(sphere);
  CHECK(v < exact);
  CHECK(v > 0.995 * exact);

  const double moved = mesh_polyhedron_volume(translate_mesh(sphere, {1, 1, 1}));
  CHECK(std::abs(moved - v) <= 1e-12 * v);
  std::reverse(sphere.begin(), sphere.end());
  CHECK(std::abs(mesh_polyhedron_volume(sphere) - v) <= 1e-12 * v);
}

TEST_CASE("parity ray caster") {
  const auto box = testing::box_mesh({0.2, 0.2, 0.2}, {0.7, 0.8, 0.9});
  const ParityRayCaster caster(box);
  using Hit = ParityRayCaster::Hit;
  CHECK(caster.classify({0.5, 0.5, 0.5}) == Hit::Inside);
  CHECK(caster.classify({0.1, 0.5, 0.5}) == Hit::Outside);
  CHECK(caster.classify({0.9, 0.5, 0.5}) == Hit::Outside);
  CHECK(caster.classify({0.5, 0.1, 0.5}) == Hit::Outside);
  CHECK(caster.classify({-3.0, 0.5, 0.5}) == Hit::Outside);

  // Binned and brute-force answers agree on a sphere.
  const auto sphere = triangulate_sphere({{0.5, 0.5, 0.5}, 0.3, 0.03});
  const ParityRayCaster sc(sphere);
  testing::Rng rng(6);
  int agree = 0, total = 0;
  for (int i = 0; i < 2000; ++i) {
    const Point3 p{rng.uniform(), rng.uniform(), rng.uniform()};
    const Hit a = sc.classify(p);
    const Hit b = sc.classify(p, ParityRayCaster::kDirection);
    if (a == Hit::Ambiguous || b == Hit::Ambiguous) continue;
    ++total;
    agree += a == b;
    // Far from the surface the answer is the sphere's.
    const double r = norm(p - Point3{0.5, 0.5, 0.5});
    if (r < 0.28) CHECK(a == Hit::Inside);
    if (r > 0.31) CHECK(a == Hit::Outside);
  }
  CHECK(agree == total);

  const ParityRayCaster empty(std::span<const Triangle>{});
  CHECK(empty.classify({0.5, 0.5, 0.5}) == Hit::Outside);
}

TEST_CASE("monte_carlo_fraction") {
  const AxisCube unit{{0, 0, 0}, 1.0};
  SUBCASE("empty mesh") {
    const McEstimate e = monte_carlo_fraction({}, unit, 1000, 1);
    CHECK(e.estimate == 0.0);
    CHECK(e.std_error == 0.0);
  }
  SUBCASE("box covering half the cell") {
    const auto box = testing::box_mesh({-1, -1, -1}, {0.5, 2, 2});
    const McEstimate e = monte_carlo_fraction(box, unit, 100000, 7);
    CHECK(std::abs(e.estimate - 0.5) <= 3 * e.std_error);
    CHECK(e.std_error == Approx(std::sqrt(e.estimate * (1 - e.estimate) / 1e5)));
  }
  SUBCASE("corner spheres") {
    const auto base = triangulate_sphere({{0, 0, 0}, 0.2, 0.0125});
    std::vector<Triangle> mesh = base;
    for (const Point3& c : {Point3{1, 1, 1}, Point3{1, 0, 1}}) {
      const auto t = translate_mesh(base, c);
      mesh.insert(mesh.end(), t.begin(), t.end());
    }
    const McEstimate e = monte_carlo_fraction(mesh, unit, 1'000'000, 42);
    CHECK(std::abs(e.estimate - std::numbers::pi * 0.008 / 2) <= 3 * e.std_error);
  }
  SUBCASE("thread count does not change the result") {
    const auto sphere = triangulate_sphere({{0.4, 0.5, 0.6}, 0.35, 0.05});
    const McEstimate a = monte_carlo_fraction(sphere, unit, 50000, 9, {8, 1});
    const McEstimate b = monte_carlo_fraction(sphere, unit, 50000, 9, {8, 3});
    CHECK(a.estimate == b.estimate);
    const McEstimate c = monte_carlo_fraction(sphere, unit, 50000, 10, {8, 1});
    CHECK(a.estimate != c.estimate);
  }
  SUBCASE("error shrinks at the binomial rate") {
    // Spread over independent seeds at three sample sizes.
    const auto box = testing::box_mesh({-1, -1, -1}, {0.3, 2, 2});
    for (std::size_t n : {1000u, 10000u, 100000u}) {
      double sq = 0.0;
      const int seeds = 40;
      for (int s = 0; s < seeds; ++s) {
        const double d = monte_carlo_fraction(box, unit, n, 1000 + s).estimate - 0.3;
        sq += d * d;
      }
      const double rms = std::sqrt(sq / seeds);
      const double predicted = std::sqrt(0.3 * 0.7 / static_cast<double>(n));
      CHECK(rms > 0.6 * predicted);
      CHECK(rms < 1.5 * predicted);
    }
  }
  CHECK_THROWS_AS(monte_carlo_fraction({}, unit, 0, 1), InvalidInputError);
}
