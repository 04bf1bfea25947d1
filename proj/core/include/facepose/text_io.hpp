#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "facepose/types.hpp"

namespace facepose {

/// Shortest decimal form that parses back to the identical double.
/// Locale-independent on both ends.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, ptr};
}

/// Fixed significant-digit form for human-facing output.
inline std::string format_double(double v, int significant_digits) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, significant_digits);
  return {buf, ptr};
}

inline double parse_double(std::string_view token, const char* context) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw DataError(std::string(context) + ": bad number '" + std::string(token) + "'");
  return v;
}

inline long parse_long(std::string_view token, const char* context) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw DataError(std::string(context) + ": bad integer '" + std::string(token) + "'");
  return v;
}

}  // namespace facepose
