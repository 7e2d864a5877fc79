#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "screening/errors.hpp"

namespace screening::csv {

/// Shortest decimal form that parses back to the same double.
inline std::string format_number(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

inline std::vector<std::string_view> split(std::string_view line, char separator = ',') {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto end = line.find(separator, start);
    fields.push_back(line.substr(start, end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') {
    fields.back().remove_suffix(1);
  }
  return fields;
}

inline double parse_double(std::string_view text, const char* field) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
    throw InvalidArgument(field, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

inline long long parse_int(std::string_view text, const char* field) {
  long long value = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
    throw InvalidArgument(field, "not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace screening::csv
