#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "f2v/cli.hpp"
#include "f2v/field_io.hpp"
#include "f2v/mesh_io.hpp"
#include "f2v/meshgen.hpp"
#include "support/reference.hpp"
#include "support/temp_dir.hpp"

using namespace f2v;
using testing::TempDir;
using testing::write_text;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(std::move(args), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string line_value(const std::string& text, const std::string& key) {
  const std::size_t at = text.find(key + ": ");
  if (at == std::string::npos) return {};
  const std::size_t from = at + key.size() + 2;
  return text.substr(from, text.find('\n', from) - from);
}

double number(const std::string& text, const std::string& key) {
  return std::stod(line_value(text, key));
}

bool contains(const std::string& text, const std::string& part) {
  return text.find(part) != std::string::npos;
}

const double kR3 = 0.2 * 0.2 * 0.2;

}  // namespace

TEST_CASE("corner spheres") {
  const Run three = run({"--gen-sphere", "0,0,0,0.2,0.05", "--gen-sphere", "1,1,1,0.2,0.05",
                         "--gen-sphere", "1,0,1,0.2,0.05", "--grid", "1,1,1", "--domain",
                         "0,0,0,1,1,1"});
  REQUIRE(three.code == 0);
  const double half = std::numbers::pi * kR3 / 2;
  CHECK(std::abs(number(three.out, "total volume") - half) / half < 0.035);
  CHECK(line_value(three.out, "cells") == "1");
  CHECK(line_value(three.out, "interface") == "1");

  const Run one = run({"--gen-sphere", "0,0,0,0.2,0.05", "--grid", "1,1,1", "--domain",
                       "0,0,0,1,1,1", "--report-corners"});
  REQUIRE(one.code == 0);
  const double sixth = std::numbers::pi * kR3 / 6;
  CHECK(std::abs(number(one.out, "total volume") - sixth) / sixth < 0.035);
  CHECK(contains(one.out, "zero-length edges removed: 0\n"));
  CHECK(contains(one.out, "cube-edge endpoints: "));
}

TEST_CASE("output volume matches the written field") {
  TempDir dir;
  const std::string csv = (dir / "f.csv").string();
  const Run r = run({"--gen-sphere", "0.5,0.5,0.5,0.3,0.04", "--grid", "6,6,6", "--domain",
                     "0,0,0,1,1,1", "--out", csv, "--threads", "2"});
  REQUIRE(r.code == 0);
  const CartesianGrid g{{0, 0, 0}, 1.0 / 6, {6, 6, 6}};
  const FractionField f = read_field_csv(csv, g);
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  const double h3 = g.cell_size() * g.cell_size() * g.cell_size();
  CHECK(number(r.out, "total volume") == doctest::Approx(sum * h3).epsilon(1e-14));
  CHECK(f.total_volume() == number(r.out, "total volume"));
  CHECK(number(r.out, "interface") + number(r.out, "full") + number(r.out, "empty") +
            number(r.out, "flood-filled") ==
        216);

  const std::string vtk = (dir / "f.vtk").string();
  CHECK(run({"--gen-sphere", "0.5,0.5,0.5,0.3,0.04", "--grid", "6,6,6", "--domain", "0,0,0,1,1,1",
             "--out", vtk, "--format", "vtk"})
            .code == 0);
  CHECK(contains(testing::read_text(vtk), "color_function"));
}

TEST_CASE("mesh files") {
  TempDir dir;
  const std::string stl = (dir / "s.stl").string();
  const std::string obj = (dir / "s.obj").string();
  const std::vector<std::string> grid{"--grid", "4,4,4", "--domain", "0,0,0,1,1,1"};
  auto with = [&](std::vector<std::string> a) {
    a.insert(a.end(), grid.begin(), grid.end());
    return a;
  };
  const Run gen = run(with({"--gen-sphere", "0.5,0.5,0.5,0.3,0.05", "--write-mesh", stl}));
  REQUIRE(gen.code == 0);
  REQUIRE(run(with({"--gen-sphere", "0.5,0.5,0.5,0.3,0.05", "--write-mesh", obj})).code == 0);
  const Run from_obj = run(with({"--mesh", obj}));
  const Run from_stl = run(with({"--mesh", stl, "--mesh-format", "stl-binary"}));
  REQUIRE(from_obj.code == 0);
  REQUIRE(from_stl.code == 0);
  CHECK(line_value(from_obj.out, "total volume") == line_value(gen.out, "total volume"));
  // Binary STL stores single precision.
  CHECK(number(from_stl.out, "total volume") ==
        doctest::Approx(number(gen.out, "total volume")).epsilon(1e-6));
  CHECK(line_value(from_stl.out, "triangles") == line_value(gen.out, "triangles"));
  CHECK(gen.err.empty());
}

TEST_CASE("empty mesh") {
  TempDir dir;
  const std::string stl = (dir / "e.stl").string();
  const std::string csv = (dir / "e.csv").string();
  write_text(stl, "solid empty\nendsolid empty\n");
  const Run r = run({"--mesh", stl, "--grid", "2,2,2", "--domain", "0,0,0,1,1,1",
                     "--default-phase", "1", "--out", csv});
  REQUIRE(r.code == 0);
  CHECK(contains(r.err, "warning"));
  CHECK(number(r.out, "total volume") == 1.0);
  const FractionField f = read_field_csv(csv, CartesianGrid{{0, 0, 0}, 0.5, {2, 2, 2}});
  for (double v : f.values()) CHECK(v == 1.0);
}

TEST_CASE("open mesh warns") {
  TempDir dir;
  const std::string stl = (dir / "open.stl").string();
  auto box = testing::box_mesh({0.2, 0.2, 0.2}, {0.8, 0.8, 0.8});
  box.pop_back();
  write_stl_ascii(stl, box);
  const Run r = run({"--mesh", stl, "--grid", "2,2,2", "--domain", "0,0,0,1,1,1"});
  CHECK(contains(r.err, "not closed"));
}

TEST_CASE("monte carlo check") {
  const Run r = run({"--gen-sphere", "0.5,0.5,0.5,0.3,0.05", "--grid", "2,2,2", "--domain",
                     "0,0,0,1,1,1", "--mc-check", "20000", "--seed", "7"});
  REQUIRE(r.code == 0);
  CHECK(line_value(r.out, "mc cells checked") == "8");
  CHECK(number(r.out, "mc max |f2v - mc| / stderr") < 5.0);
  const Run again = run({"--gen-sphere", "0.5,0.5,0.5,0.3,0.05", "--grid", "2,2,2", "--domain",
                         "0,0,0,1,1,1", "--mc-check", "20000", "--seed", "7", "--threads", "3"});
  CHECK(again.out == r.out);
}

TEST_CASE("exit codes") {
  TempDir dir;
  SUBCASE("help") {
    const Run r = run({"--help"});
    CHECK(r.code == kExitOk);
    CHECK(contains(r.out, "--gen-sphere"));
  }
  SUBCASE("missing grid") {
    const Run r = run({"--gen-sphere", "0,0,0,0.2,0.05", "--domain", "0,0,0,1,1,1"});
    CHECK(r.code == kExitConfig);
    CHECK(contains(r.err, "--grid"));
    CHECK(contains(r.err, "Usage"));
  }
  SUBCASE("missing mesh source") {
    CHECK(run({"--grid", "1,1,1", "--domain", "0,0,0,1,1,1"}).code == kExitConfig);
  }
  SUBCASE("bad values") {
    const std::vector<std::vector<std::string>> cases{
        {"--gen-sphere", "0,0,0,0.2", "--grid", "1,1,1", "--domain", "0,0,0,1,1,1"},
        {"--gen-sphere", "0,0,0,0.2,0.5", "--grid", "1,1,1", "--domain", "0,0,0,1,1,1"},
        {"--gen-sphere", "0,0,0,0.2,0.05", "--grid", "1,1", "--domain", "0,0,0,1,1,1"},
        {"--gen-sphere", "0,0,0,0.2,0.05", "--grid", "1,1,1", "--domain", "0,0,0,1,1,2"},
        {"--gen-sphere", "0,0,0,0.2,0.05", "--grid", "1,1,1", "--domain", "0,0,0,1,1,1",
         "--default-phase", "2"},
        {"--gen-sphere", "0,0,0,0.2,0.05", "--grid", "1,1,1", "--domain", "0,0,0,1,1,1",
         "--seed", "3"},
        {"--gen-sphere", "0,0,0,0.2,0.05", "--mesh", "x.stl", "--grid", "1,1,1", "--domain",
         "0,0,0,1,1,1"},
        {"--gen-sphere", "0,0,0,0.2,0.05", "--grid", "1,1,1", "--domain", "0,0,0,1,1,1",
         "--format", "json"}};
    for (const auto& args : cases) CHECK(run(args).code == kExitConfig);
  }
  SUBCASE("parse error") {
    const std::string stl = (dir / "bad.stl").string();
    write_text(stl, "solid x\nfacet normal 0 0 1\nouter loop\nvertex 0 0 zero\n");
    const Run r = run({"--mesh", stl, "--grid", "1,1,1", "--domain", "0,0,0,1,1,1"});
    CHECK(r.code == kExitParse);
    CHECK(contains(r.err, "bad.stl:4:"));
  }
  SUBCASE("inconsistent mesh") {
    const std::string stl = (dir / "two.stl").string();
    auto mesh = triangulate_sphere({{0.25, 0.5, 0.5}, 0.15, 0.03});
    const auto other = testing::reversed(triangulate_sphere({{0.75, 0.5, 0.5}, 0.15, 0.03}));
    mesh.insert(mesh.end(), other.begin(), other.end());
    write_stl_binary(stl, mesh);
    const Run r = run({"--mesh", stl, "--grid", "16,16,16", "--domain", "0,0,0,1,1,1"});
    CHECK(r.code == kExitInconsistent);
  }
  SUBCASE("unwritable output") {
    const Run r = run({"--gen-sphere", "0.5,0.5,0.5,0.3,0.05", "--grid", "1,1,1", "--domain",
                       "0,0,0,1,1,1", "--out", "/nonexistent-dir/f.csv"});
    CHECK(r.code == kExitFailure);
  }
}
