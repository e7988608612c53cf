#pragma once

#include <iosfwd>
#include <string>

#include "pam/field.hpp"

namespace pam {

/// Flat little-endian layout: "PAMF", u32 version, u32 d, u64 axis sizes (d+1),
/// f64 H0, f64 H[d], u64 seed, u32 method, f64 coordinates per axis, then the
/// row-major f64 payload.
void write_field_binary(std::ostream& os, const FieldGrid& f);
FieldGrid read_field_binary(std::istream& is);

void save_field(const std::string& path, const FieldGrid& f);
FieldGrid load_field(const std::string& path);

/// One row per grid point: t, x_1..x_d, value.
void write_field_csv(std::ostream& os, const FieldGrid& f);

}  // namespace pam
