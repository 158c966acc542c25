#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cbir::detail {

/// Appends the shortest decimal that parses back to exactly `value`.
void append_double(std::string& out, double value);
std::string format_double(double value);

/// Parses a whole token; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_integer(std::string_view token);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace cbir::detail
