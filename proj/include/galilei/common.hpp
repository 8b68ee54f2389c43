#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace galilei {

inline constexpr const char kVersion[] = "1.0.0";

inline void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
}

// Fixed 17-significant-digit formatting; enough digits to round-trip a
// double exactly, so emitted tables can be re-read without loss.
inline std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace galilei
