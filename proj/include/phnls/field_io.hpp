#pragma once

#include "phnls/field.hpp"

#include <iosfwd>
#include <string>

namespace phnls {

/// Layout and model data stored in a field file header.
struct FieldHeader {
  ModelParams params;
  int hermite_modes = 0;
  std::vector<ZAxis> z_axes;
  Representation representation = Representation::Physical;
};

/// "NLSFLD01", an 8-byte little-endian header length, the JSON header,
/// then float64 (re, im) pairs, little-endian, in the Grid layout.
void write_field(std::ostream &os, const Field &f);
void write_field(const std::string &path, const Field &f);

FieldHeader read_field_header(std::istream &is);
/// Builds a fresh grid from the header.
Field read_field(std::istream &is);
Field read_field(const std::string &path);

} // namespace phnls
