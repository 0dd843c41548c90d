#pragma once

#include <string>
#include <vector>

#include "dnls/field.hpp"

namespace dnls {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace io {

// All floats in serialized artifacts go through this: 17 significant digits.
std::string g17(double v);

// JSON string literal with escaping.
std::string jstr(const std::string& s);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

// One complex field as CSV: header lines carry the grid and tagging, then
// index,re,im rows.
struct FieldRecord {
  std::string kind;       // "lattice" or "continuum"
  std::string component;  // "u", "psi", "phi", ...
  std::size_t m = 0;
  double spacing = 0.0;   // h or dx
  double tau = 0.0;
  bool has_tau = false;
  cvec values;
};

std::string field_csv(const FieldRecord& rec);
void write_field_csv(const std::string& path, const FieldRecord& rec);
FieldRecord read_field_csv(const std::string& path);

}  // namespace io
}  // namespace dnls
