#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace flowids {

// Shortest decimal form that parses back to the same double. Used for every
// floating-point value written to traces, model files and CSV outputs so
// that identical runs produce identical bytes.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace flowids
