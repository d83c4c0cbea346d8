#include "f2v/field_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "f2v/errors.hpp"

namespace f2v {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

void write_csv(const FractionField& field, std::ostream& out) {
  const CartesianGrid& g = field.grid();
  out << "i,j,k,fraction\n";
  for (std::size_t n = 0; n < g.cell_count(); ++n) {
    const CellIndex c = g.unravel(n);
    out << c.i << ',' << c.j << ',' << c.k << ',' << format_double(field.values()[n]) << '\n';
  }
}

void write_vtk(const FractionField& field, std::ostream& out) {
  const CartesianGrid& g = field.grid();
  const auto& n = g.counts();
  const Point3& o = g.origin();
  const std::string h = format_double(g.cell_size());
  out << "# vtk DataFile Version 3.0\n"
      << "f2v volume fraction\n"
      << "ASCII\n"
      << "DATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << n[0] + 1 << ' ' << n[1] + 1 << ' ' << n[2] + 1 << '\n'
      << "ORIGIN " << format_double(o.x) << ' ' << format_double(o.y) << ' '
      << format_double(o.z) << '\n'
      << "SPACING " << h << ' ' << h << ' ' << h << '\n'
      << "CELL_DATA " << g.cell_count() << '\n'
      << "SCALARS color_function double 1\n"
      << "LOOKUP_TABLE default\n";
  for (std::size_t k = 0; k < n[2]; ++k)
    for (std::size_t j = 0; j < n[1]; ++j)
      for (std::size_t i = 0; i < n[0]; ++i) out << format_double(field.at({i, j, k})) << '\n';
}

}  // namespace

void write_field(const FractionField& field, const std::filesystem::path& path,
                 FieldFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (format == FieldFormat::Csv) {
    write_csv(field, out);
  } else {
    write_vtk(field, out);
  }
  out.flush();
  if (!out) throw std::runtime_error("error writing " + path.string());
}

FractionField read_field_csv(const std::filesystem::path& path, const CartesianGrid& grid) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  FractionField field(grid);
  std::vector<char> seen(grid.cell_count(), 0);
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "i,j,k,fraction") fail("expected header 'i,j,k,fraction'");
      continue;
    }
    if (line.empty()) continue;
    std::size_t idx[3];
    double value = 0.0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (std::size_t& v : idx) {
      const auto r = std::from_chars(p, end, v);
      if (r.ec != std::errc() || r.ptr == end || *r.ptr != ',') fail("bad index");
      p = r.ptr + 1;
    }
    const auto r = std::from_chars(p, end, value);
    if (r.ec != std::errc() || r.ptr != end) fail("bad fraction");
    const CellIndex c{idx[0], idx[1], idx[2]};
    const auto& n = grid.counts();
    if (c.i >= n[0] || c.j >= n[1] || c.k >= n[2]) fail("cell index out of range");
    const std::size_t lin = grid.linear(c);
    if (seen[lin]) fail("duplicate cell");
    seen[lin] = 1;
    field.values()[lin] = value;
  }
  for (char s : seen)
    if (!s) throw ParseError(path.string() + ": missing cells");
  return field;
}

}  // namespace f2v
