#pragma once

// Field snapshot files: "TNLS", u32 version (1), u32 M, f64 timestamp, then M^3
// complex samples as little-endian f64 (re, im) pairs, x3 fastest.

#include <string>

#include "tnls/field.hpp"

namespace tnls {

inline constexpr unsigned snapshot_version = 1;

void write_snapshot(const std::string& path, const TorusField& f);
TorusField read_snapshot(const std::string& path);

}  // namespace tnls
