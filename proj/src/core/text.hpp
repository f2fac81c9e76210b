#pragma once

#include <charconv>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace annrel {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

/// string -> index map with heterogeneous (string_view) lookup.
using StringIndexMap =
    std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>>;

/// Shortest decimal representation that round-trips the exact double.
/// Used everywhere numbers are serialized so reruns are byte-identical.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace annrel
