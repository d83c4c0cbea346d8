#include "f2v/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <thread>

#include "f2v/errors.hpp"
#include "f2v/field_io.hpp"
#include "f2v/grid.hpp"
#include "f2v/mesh_io.hpp"
#include "f2v/meshgen.hpp"
#include "f2v/oracles.hpp"

namespace f2v {

namespace {

struct RunConfig {
  std::string mesh_path;
  std::string mesh_format = "auto";
  std::vector<std::string> spheres;
  std::string grid;
  std::string domain;
  int default_phase = 0;
  std::string out_path;
  std::string format = "csv";
  std::size_t mc_samples = 0;
  std::uint64_t seed = 20240101;
  bool report_corners = false;
  unsigned threads = 0;
  std::string write_mesh;
};

template <class T>
std::vector<T> parse_list(const std::string& text, std::size_t expected, const char* flag) {
  std::vector<T> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    T v{};
    const char* first = text.data() + pos;
    const char* last = text.data() + comma;
    const auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc() || r.ptr != last) {
      throw InvalidInputError(std::string(flag) + ": cannot parse '" + text + "'");
    }
    out.push_back(v);
    if (comma == text.size()) break;
    pos = comma + 1;
  }
  if (out.size() != expected) {
    throw InvalidInputError(std::string(flag) + ": expected " + std::to_string(expected) +
                            " comma-separated values, got '" + text + "'");
  }
  return out;
}

MeshFormat mesh_format(const std::string& name) {
  if (name == "auto") return MeshFormat::Auto;
  if (name == "stl-ascii") return MeshFormat::StlAscii;
  if (name == "stl-binary") return MeshFormat::StlBinary;
  return MeshFormat::Obj;
}

std::vector<Triangle> load_mesh(const RunConfig& cfg, std::ostream& err) {
  if (!cfg.mesh_path.empty()) {
    auto mesh = read_mesh(cfg.mesh_path, mesh_format(cfg.mesh_format));
    if (mesh.empty()) err << "warning: " << cfg.mesh_path << " contains no triangles\n";
    return mesh;
  }
  std::vector<Triangle> mesh;
  for (const std::string& s : cfg.spheres) {
    const auto v = parse_list<double>(s, 5, "--gen-sphere");
    const auto sphere = triangulate_sphere(SphereSpec{{v[0], v[1], v[2]}, v[3], v[4]});
    mesh.insert(mesh.end(), sphere.begin(), sphere.end());
  }
  return mesh;
}

void write_mesh_file(const std::string& path, std::span<const Triangle> mesh) {
  std::string ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".obj") {
    write_obj(path, weld(mesh));
  } else {
    write_stl_binary(path, mesh);
  }
}

void report_mc(std::span<const Triangle> mesh, const FractionField& field, const RunConfig& cfg,
               std::ostream& out) {
  const CartesianGrid& g = field.grid();
  double worst = 0.0;
  std::size_t checked = 0;
  CellIndex worst_cell{};
  for (std::size_t n = 0; n < g.cell_count(); ++n) {
    const double f = field.values()[n];
    if (f == 0.0 || f == 1.0) continue;
    const CellIndex c = g.unravel(n);
    const McEstimate mc = monte_carlo_fraction(mesh, AxisCube{g.cell_origin(c), g.cell_size()},
                                               cfg.mc_samples, cfg.seed + n,
                                               McOptions{16, std::max(1u, cfg.threads)});
    const double diff = std::abs(f - mc.estimate);
    const double z = mc.std_error > 0.0 ? diff / mc.std_error : (diff > 0.0 ? INFINITY : 0.0);
    if (checked == 0 || z > worst) {
      worst = z;
      worst_cell = c;
    }
    ++checked;
  }
  out << "mc cells checked: " << checked << '\n';
  if (checked > 0) {
    out << "mc max |f2v - mc| / stderr: " << format_double(worst) << " at (" << worst_cell.i
        << ',' << worst_cell.j << ',' << worst_cell.k << ")\n";
  }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto counts = parse_list<std::size_t>(cfg.grid, 3, "--grid");
  const auto box = parse_list<double>(cfg.domain, 6, "--domain");
  const CartesianGrid grid = CartesianGrid::from_domain(
      {box[0], box[1], box[2]}, {box[3], box[4], box[5]}, {counts[0], counts[1], counts[2]});

  const std::vector<Triangle> mesh = load_mesh(cfg, err);
  if (!cfg.write_mesh.empty()) write_mesh_file(cfg.write_mesh, mesh);
  if (!mesh.empty()) {
    const TopologyReport topo = check_topology(weld(mesh));
    if (!topo.closed()) {
      err << "warning: mesh is not closed (" << topo.boundary_edges << " boundary, "
          << topo.nonmanifold_edges << " non-manifold, " << topo.misoriented_edges
          << " misoriented edges)\n";
    }
  }

  FieldOptions opts;
  opts.default_phase = cfg.default_phase;
  opts.threads = cfg.threads > 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  const FieldResult result = compute_fraction_field(mesh, grid, opts);
  const FieldStats& s = result.stats;

  if (!cfg.out_path.empty()) {
    write_field(result.field, cfg.out_path, cfg.format == "vtk" ? FieldFormat::Vtk : FieldFormat::Csv);
  }

  out << "triangles: " << mesh.size() << '\n';
  out << "cells: " << grid.cell_count() << '\n';
  out << "total volume: " << format_double(result.field.total_volume()) << '\n';
  out << "interface: " << s.interface_cells << '\n';
  out << "full: " << s.full_cells << '\n';
  out << "empty: " << s.empty_cells << '\n';
  out << "flood-filled: " << s.flood_filled + s.far_classified + s.default_filled << '\n';
  if (cfg.report_corners) {
    const VolumeDiagnostics& d = s.volume;
    out << "far-classified cells: " << s.far_classified << '\n';
    out << "default-filled cells: " << s.default_filled << '\n';
    out << "triangles outside grid: " << s.triangles_outside << '\n';
    out << "zero-length edges removed: " << s.zero_length_edges << '\n';
    out << "degenerate polygons skipped: " << d.degenerate_polygons << '\n';
    out << "polygons on face x=1 skipped: " << d.polygons_on_face_x1 << '\n';
    out << "face x=1 edges: " << d.face_x1_edges << '\n';
    out << "cube-edge endpoints: " << d.cube_edge_endpoints << '\n';
    out << "x-parallel normals on face x=1: " << d.axis_parallel_edges << '\n';
  }
  if (cfg.mc_samples > 0) {
    if (mesh.empty()) {
      out << "mc cells checked: 0\n";
    } else {
      report_mc(mesh, result.field, cfg, out);
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Volume fractions of a triangulated interface on a Cartesian grid", "f2v"};
  RunConfig cfg;

  auto* mesh_opt = app.add_option("--mesh", cfg.mesh_path, "Interface mesh (STL or OBJ)");
  app.add_option("--mesh-format", cfg.mesh_format, "Mesh format")
      ->check(CLI::IsMember({"auto", "stl-ascii", "stl-binary", "obj"}));
  auto* sphere_opt =
      app.add_option("--gen-sphere", cfg.spheres, "Generated sphere cx,cy,cz,r,lbar (repeatable)");
  mesh_opt->excludes(sphere_opt);
  app.add_option("--grid", cfg.grid, "Cell counts NX,NY,NZ")->required();
  app.add_option("--domain", cfg.domain, "Box x0,y0,z0,x1,y1,z1")->required();
  app.add_option("--default-phase", cfg.default_phase, "Fill value for an empty mesh")
      ->check(CLI::IsMember({0, 1}));
  app.add_option("--out", cfg.out_path, "Output field path");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "vtk"}));
  auto* mc_opt = app.add_option("--mc-check", cfg.mc_samples,
                                "Monte Carlo samples per interface cell");
  app.add_option("--seed", cfg.seed, "Monte Carlo seed")->needs(mc_opt);
  app.add_flag("--report-corners", cfg.report_corners, "Print corner-case counters");
  app.add_option("--threads", cfg.threads, "Worker threads (0: hardware concurrency)");
  app.add_option("--write-mesh", cfg.write_mesh, "Write the input mesh (.stl or .obj)");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
    if (cfg.mesh_path.empty() && cfg.spheres.empty()) {
      throw InvalidInputError("one of --mesh or --gen-sphere is required");
    }
    return run(cfg, out, err);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  } catch (const InvalidInputError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const InconsistentMeshError& e) {
    err << "inconsistent mesh: " << e.what() << '\n';
    return kExitInconsistent;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace f2v
