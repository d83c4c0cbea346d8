#pragma once

#include <filesystem>
#include <string>

#include "f2v/grid.hpp"

namespace f2v {

enum class FieldFormat { Csv, Vtk };

// csv: "i,j,k,fraction" header, one row per cell with k fastest, values
// with 17 significant digits.
// vtk: legacy ASCII STRUCTURED_POINTS, cell scalar "color_function",
// values with x fastest.
// Throws std::runtime_error if the file cannot be written.
void write_field(const FractionField& field, const std::filesystem::path& path,
                 FieldFormat format);

std::string format_double(double v);

// Reads a csv written by write_field back onto the given grid. Every cell
// must appear exactly once. Throws ParseError otherwise.
FractionField read_field_csv(const std::filesystem::path& path, const CartesianGrid& grid);

}  // namespace f2v
