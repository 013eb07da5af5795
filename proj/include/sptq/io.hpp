#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sptq/models.hpp"

namespace sptq {

// Shortest round-trip decimal, '.' separator regardless of locale.
std::string format_double(double v);

std::uint64_t fnv1a64(const std::string& s);
std::string hex64(std::uint64_t v);

// Lines are written after "# ". Column names and rows follow.
std::string render_csv(const Table& t, const std::vector<std::string>& header);

// Writes to a sibling temp file and renames over `path`.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace sptq
