#pragma once

// Small tokenizing helpers shared by the text formats.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sigma::text {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_ws(std::string_view s);
/// Splits on `sep` only outside {...} groups.
std::vector<std::string_view> split_top_level(std::string_view s, char sep);

std::uint64_t parse_uint(std::string_view s, const std::string& what);
std::vector<std::uint64_t> parse_uint_list(std::string_view s, const std::string& what);

}  // namespace sigma::text
