#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "f2v/geometry.hpp"
#include "f2v/meshgen.hpp"

namespace f2v {

enum class MeshFormat { Auto, StlAscii, StlBinary, Obj };

// Triangle soup from an STL or OBJ file. Auto picks OBJ for a .obj
// extension and otherwise treats the file as STL, binary when its size is
// 84 + 50 n for the facet count n in the header, ASCII otherwise.
//
// STL facet normals are ignored; orientation comes from vertex order. OBJ
// reads only v and f records (f accepts v/vt/vn forms and negative indices)
// and fan-triangulates faces with more than three vertices.
//
// Throws ParseError naming the line (text) or byte offset (binary) of the
// first malformed record. An empty mesh is not an error.
std::vector<Triangle> read_mesh(const std::filesystem::path& path,
                                MeshFormat format = MeshFormat::Auto);

void write_stl_ascii(const std::filesystem::path& path, std::span<const Triangle> mesh);
void write_stl_binary(const std::filesystem::path& path, std::span<const Triangle> mesh);
void write_obj(const std::filesystem::path& path, const IndexedMesh& mesh);

}  // namespace f2v
