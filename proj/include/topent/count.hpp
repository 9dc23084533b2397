#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace topent {

/// Prefix counts grow like k^n, so they are kept exact.
using Count = boost::multiprecision::cpp_int;

/// Natural log of a positive count, valid far beyond the double range.
inline double log_count(const Count& c) {
  if (c <= 0) return -INFINITY;
  const std::size_t bits = boost::multiprecision::msb(c) + 1;
  if (bits <= 1000) return std::log(static_cast<double>(c));
  const std::size_t shift = bits - 64;
  const Count top = c >> shift;
  return std::log(static_cast<double>(top)) + static_cast<double>(shift) * std::log(2.0);
}

inline Count ipow(std::uint64_t base, std::size_t exponent) {
  Count result = 1;
  Count b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

inline std::string to_string(const Count& c) { return c.str(); }

}  // namespace topent
