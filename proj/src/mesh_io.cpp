#include "f2v/mesh_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "f2v/errors.hpp"

namespace f2v {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

[[noreturn]] void fail_line(const std::filesystem::path& path, std::size_t line,
                            const std::string& what) {
  throw ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
}

// Whitespace-separated tokens of one line.
std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_long(std::string_view s, long& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Calls fn(line_number, tokens) for every non-blank line.
template <class Fn>
void for_each_line(const std::string& text, Fn&& fn) {
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    std::string_view line(text.data() + pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto tokens = split(line);
    if (!tokens.empty()) fn(line_no, tokens);
    pos = end + 1;
  }
}

Point3 parse_point(const std::filesystem::path& path, std::size_t line,
                   std::span<const std::string_view> t) {
  Point3 p;
  for (std::size_t a = 0; a < 3; ++a) {
    if (!parse_double(t[a], p[a])) {
      fail_line(path, line, "bad coordinate '" + std::string(t[a]) + "'");
    }
  }
  return p;
}

std::vector<Triangle> parse_stl_ascii(const std::filesystem::path& path, const std::string& text) {
  struct Token {
    std::size_t line;
    std::string_view text;
    bool line_start;
  };
  std::vector<Token> tokens;
  for_each_line(text, [&](std::size_t line, const std::vector<std::string_view>& t) {
    for (std::size_t i = 0; i < t.size(); ++i) tokens.push_back({line, t[i], i == 0});
  });

  std::vector<Triangle> mesh;
  std::size_t at = 0;
  const std::size_t last_line = tokens.empty() ? 1 : tokens.back().line;
  auto next = [&](const char* what) -> const Token& {
    if (at == tokens.size()) fail_line(path, last_line, std::string("unexpected end of file, expected ") + what);
    return tokens[at++];
  };
  auto expect = [&](const char* word) {
    const Token& t = next(word);
    if (lower(t.text) != word) {
      fail_line(path, t.line, std::string("expected '") + word + "', got '" + std::string(t.text) + "'");
    }
  };
  // Solid names run to the end of their line.
  auto skip_name = [&] {
    while (at < tokens.size() && !tokens[at].line_start) ++at;
  };
  auto number = [&](double& out) {
    const Token& t = next("a number");
    if (!parse_double(t.text, out)) fail_line(path, t.line, "bad number '" + std::string(t.text) + "'");
  };

  if (tokens.empty()) fail_line(path, 1, "expected 'solid'");
  while (at < tokens.size()) {
    expect("solid");
    skip_name();
    while (true) {
      const Token& t = next("'facet' or 'endsolid'");
      const std::string key = lower(t.text);
      if (key == "endsolid") {
        skip_name();
        break;
      }
      if (key != "facet") fail_line(path, t.line, "expected 'facet' or 'endsolid'");
      expect("normal");
      double ignored = 0.0;
      for (int a = 0; a < 3; ++a) number(ignored);
      expect("outer");
      expect("loop");
      Triangle tri{};
      for (Point3& p : tri) {
        expect("vertex");
        for (std::size_t a = 0; a < 3; ++a) number(p[a]);
        if (!is_finite(p)) fail_line(path, tokens[at - 1].line, "non-finite coordinate");
      }
      expect("endloop");
      expect("endfacet");
      mesh.push_back(tri);
    }
  }
  return mesh;
}

std::uint32_t load_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void store_u32(unsigned char* p, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) p[b] = static_cast<unsigned char>(v >> (8 * b));
}

bool binary_size_matches(const std::string& bytes) {
  if (bytes.size() < 84) return false;
  const auto n = load_u32(reinterpret_cast<const unsigned char*>(bytes.data()) + 80);
  return bytes.size() == 84 + 50 * static_cast<std::uint64_t>(n);
}

std::vector<Triangle> parse_stl_binary(const std::filesystem::path& path,
                                       const std::string& bytes) {
  if (bytes.size() < 84) throw ParseError(path.string() + ": truncated binary STL header");
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint32_t n = load_u32(data + 80);
  if (bytes.size() != 84 + 50 * static_cast<std::uint64_t>(n)) {
    throw ParseError(path.string() + ": binary STL declares " + std::to_string(n) +
                     " facets but has " + std::to_string(bytes.size()) + " bytes");
  }
  std::vector<Triangle> mesh(n);
  for (std::uint32_t f = 0; f < n; ++f) {
    const std::size_t offset = 84 + 50 * static_cast<std::size_t>(f);
    // Skip the 12-byte facet normal.
    const unsigned char* p = data + offset + 12;
    for (std::size_t v = 0; v < 3; ++v)
      for (std::size_t a = 0; a < 3; ++a, p += 4) {
        const float c = std::bit_cast<float>(load_u32(p));
        if (!std::isfinite(c)) {
          throw ParseError(path.string() + ": non-finite coordinate at byte offset " +
                           std::to_string(p - data));
        }
        mesh[f][v][a] = static_cast<double>(c);
      }
  }
  return mesh;
}

std::vector<Triangle> parse_obj(const std::filesystem::path& path, const std::string& text) {
  std::vector<Point3> vertices;
  struct FaceRecord {
    std::size_t line;
    std::vector<long> corners;  // 1-based absolute
  };
  std::vector<FaceRecord> faces;
  for_each_line(text, [&](std::size_t line, const std::vector<std::string_view>& t) {
    if (t[0] == "v") {
      if (t.size() < 4 || t.size() > 5) fail_line(path, line, "v needs three coordinates");
      vertices.push_back(parse_point(path, line, std::span(t).subspan(1, 3)));
    } else if (t[0] == "f") {
      if (t.size() < 4) fail_line(path, line, "face needs at least three vertices");
      FaceRecord rec{line, {}};
      for (std::size_t c = 1; c < t.size(); ++c) {
        const std::string_view ref = t[c].substr(0, t[c].find('/'));
        long idx = 0;
        if (!parse_long(ref, idx) || idx == 0) {
          fail_line(path, line, "bad vertex reference '" + std::string(t[c]) + "'");
        }
        if (idx < 0) idx += static_cast<long>(vertices.size()) + 1;
        rec.corners.push_back(idx);
      }
      faces.push_back(std::move(rec));
    }
  });

  std::vector<Triangle> mesh;
  for (const FaceRecord& f : faces) {
    for (long idx : f.corners) {
      if (idx < 1 || idx > static_cast<long>(vertices.size())) {
        fail_line(path, f.line, "vertex index out of range");
      }
    }
    const auto at = [&](std::size_t c) { return vertices[static_cast<std::size_t>(f.corners[c] - 1)]; };
    for (std::size_t c = 1; c + 1 < f.corners.size(); ++c) mesh.push_back({at(0), at(c), at(c + 1)});
  }
  return mesh;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<Triangle> read_mesh(const std::filesystem::path& path, MeshFormat format) {
  const std::string bytes = read_file(path);
  if (format == MeshFormat::Auto) {
    if (lower(path.extension().string()) == ".obj") {
      format = MeshFormat::Obj;
    } else {
      // Binary files may also start with "solid", so the size decides.
      format = binary_size_matches(bytes) ? MeshFormat::StlBinary : MeshFormat::StlAscii;
    }
  }
  switch (format) {
    case MeshFormat::StlAscii: return parse_stl_ascii(path, bytes);
    case MeshFormat::StlBinary: return parse_stl_binary(path, bytes);
    case MeshFormat::Obj: return parse_obj(path, bytes);
    case MeshFormat::Auto: break;
  }
  throw ParseError("unknown mesh format");
}

void write_stl_ascii(const std::filesystem::path& path, std::span<const Triangle> mesh) {
  std::ofstream out = open_out(path);
  out.precision(17);
  out << "solid f2v\n";
  for (const Triangle& t : mesh) {
    const double a = 2.0 * triangle_area(t);
    const Point3 n = a > 0.0 ? triangle_normal(t) / a : Point3{};
    out << "  facet normal " << n.x << ' ' << n.y << ' ' << n.z << "\n    outer loop\n";
    for (const Point3& p : t) out << "      vertex " << p.x << ' ' << p.y << ' ' << p.z << '\n';
    out << "    endloop\n  endfacet\n";
  }
  out << "endsolid f2v\n";
  if (!out) throw std::runtime_error("error writing " + path.string());
}

void write_stl_binary(const std::filesystem::path& path, std::span<const Triangle> mesh) {
  std::ofstream out = open_out(path, std::ios::binary);
  std::array<unsigned char, 84> header{};
  std::memcpy(header.data(), "f2v binary stl", 14);
  store_u32(header.data() + 80, static_cast<std::uint32_t>(mesh.size()));
  out.write(reinterpret_cast<const char*>(header.data()), header.size());
  std::array<unsigned char, 50> rec{};
  for (const Triangle& t : mesh) {
    const double a = 2.0 * triangle_area(t);
    const Point3 n = a > 0.0 ? triangle_normal(t) / a : Point3{};
    unsigned char* p = rec.data();
    auto put = [&p](double v) {
      store_u32(p, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      p += 4;
    };
    put(n.x), put(n.y), put(n.z);
    for (const Point3& v : t) put(v.x), put(v.y), put(v.z);
    out.write(reinterpret_cast<const char*>(rec.data()), rec.size());
  }
  if (!out) throw std::runtime_error("error writing " + path.string());
}

void write_obj(const std::filesystem::path& path, const IndexedMesh& mesh) {
  std::ofstream out = open_out(path);
  out.precision(17);
  for (const Point3& v : mesh.vertices) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const Face& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  if (!out) throw std::runtime_error("error writing " + path.string());
}

}  // namespace f2v
