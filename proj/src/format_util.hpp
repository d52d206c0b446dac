#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace flowres::detail {

/// Shortest round-trip decimal form of a double; deterministic.
inline std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

inline std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace flowres::detail
