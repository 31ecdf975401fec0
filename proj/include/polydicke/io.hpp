#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace polydicke {

inline constexpr std::string_view kVersion = "0.1.0";

/// Shortest round-trip decimal form; "undefined" for non-finite input.
std::string format_number(double value);
std::string format_number(const std::optional<double>& value);

/// 64-bit FNV-1a, printed as 16 hex digits by hash_hex.
std::uint64_t fnv1a(std::string_view data);
std::string hash_hex(std::string_view data);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::string& path, std::string_view content);

}  // namespace polydicke
