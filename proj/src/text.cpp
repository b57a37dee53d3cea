#include "sigma/text.hpp"

#include <cctype>
#include <charconv>

#include "sigma/error.hpp"

namespace sigma::text {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> split_top_level(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i < s.size() && s[i] == '{') ++depth;
    if (i < s.size() && s[i] == '}') {
      require(depth > 0, "unbalanced '}'");
      --depth;
    }
    if (i == s.size() || (s[i] == sep && depth == 0)) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  require(depth == 0, "unbalanced '{'");
  return out;
}

std::uint64_t parse_uint(std::string_view s, const std::string& what) {
  s = trim(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(!s.empty() && ec == std::errc() && ptr == s.data() + s.size(),
          "malformed " + what + " '" + std::string(s) + "'");
  return v;
}

std::vector<std::uint64_t> parse_uint_list(std::string_view s, const std::string& what) {
  std::vector<std::uint64_t> out;
  s = trim(s);
  if (s.empty()) return out;
  for (auto item : split(s, ',')) out.push_back(parse_uint(item, what));
  return out;
}

}  // namespace sigma::text
