#ifndef BANDITSUM_CSV_HPP
#define BANDITSUM_CSV_HPP

#include <cstdio>
#include <string>
#include <string_view>

namespace banditsum::csv {

/// Fixed 8-decimal rendering used in every CSV the project writes.
inline std::string number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.8f", value);
  return buf;
}

/// Quotes a field when it contains a comma, quote or newline.
inline std::string field(std::string_view value) {
  if (value.find_first_of(",\"\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace banditsum::csv

#endif  // BANDITSUM_CSV_HPP
