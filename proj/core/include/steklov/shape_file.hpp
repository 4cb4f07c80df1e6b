#pragma once

#include <iosfwd>
#include <string>

#include "steklov/conformal.hpp"

namespace steklov {

// Shape file, version 1. Plain text:
//
//   steklov-shape v1
//   K <truncation>
//   <k> <re> <im>
//   ...
//
// Coefficient rows are sparse, k >= 0 strictly increasing, values printed
// with 17 significant digits so a parse/serialize round trip is exact.
// '#' starts a comment.
std::string serialize_shape(const ConformalShape& shape);
ConformalShape parse_shape(std::istream& in);
ConformalShape parse_shape(const std::string& text);

void write_shape_file(const std::string& path, const ConformalShape& shape);
ConformalShape read_shape_file(const std::string& path);

} // namespace steklov
