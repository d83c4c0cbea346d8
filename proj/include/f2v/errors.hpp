#pragma once

#include <stdexcept>
#include <string>

namespace f2v {

// Malformed caller input: degenerate triangles, non-finite coordinates,
// bad grid parameters.
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A polygon whose area or orientation cannot be determined.
class DegeneratePolygonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every cube vertex lies on the plane of the selected triangle.
class ClassificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bulk flood fill reached both a full and an empty seed.
class InconsistentMeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace f2v
