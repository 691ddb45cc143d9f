#pragma once

#include <charconv>
#include <optional>
#include <string_view>

namespace airoyalties::detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Whole-string numeric parse; nullopt on any leftover characters.
template <typename T>
std::optional<T> parse_number(std::string_view text) {
  text = trim(text);
  T v{};
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || p != text.data() + text.size()) return std::nullopt;
  return v;
}

}  // namespace airoyalties::detail
