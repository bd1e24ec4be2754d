#include "wofz/format.hpp"

#include <charconv>
#include <cmath>

namespace wofz::format {

std::string double_shortest(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0.0 ? "inf" : "-inf";
  }
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string json_number(double v) {
  if (!std::isfinite(v)) {
    return "null";
  }
  return double_shortest(v);
}

std::optional<double> parse_double(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r';
  };
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  if (b == e) {
    return std::nullopt;
  }
  double v = 0.0;
  const char* first = s.data() + b;
  const char* last = s.data() + e;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    return std::nullopt;
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace wofz::format
