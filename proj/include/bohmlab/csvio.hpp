#pragma once

#include <string>
#include <vector>

#include "bohmlab/configuration.hpp"

namespace bohmlab {

/// Shortest round-trip decimal representation of a double, so identical
/// runs produce byte-identical files.
std::string format_double(double v);

/// Write-then-rename so readers never observe partial files.
void write_file_atomic(const std::string& path, const std::string& content);

/// Column header for N particles in d dimensions: p{i}_{x|y|z}.
std::string configuration_header(int particles, int dim);

/// One CSV row: the N*d coordinates of the canonical representative.
std::string configuration_row(const UnorderedConfiguration& q);
std::string configuration_row(const OrderedConfiguration& q);

/// FNV-1a 64-bit hash, hex-encoded; used for config manifests.
std::string fnv1a_hex(const std::string& data);

}  // namespace bohmlab
