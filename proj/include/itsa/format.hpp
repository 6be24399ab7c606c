#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace itsa {

// Shortest decimal form that parses back to exactly the same double.
inline std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

// Fixed-precision form for plot coordinates and text tables.
inline std::string format_fixed(double v, int decimals) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace itsa
