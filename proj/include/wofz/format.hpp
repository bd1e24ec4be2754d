#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Locale-independent text helpers shared by the CSV/JSON writers, the
// parsers, and the CLI.

namespace wofz::format {

// Shortest decimal string that round-trips to the same double
// (std::to_chars). NaN renders as "nan", infinities as "inf"/"-inf".
std::string double_shortest(double v);

// Like double_shortest, but NaN/inf render as "null" (JSON has no NaN).
std::string json_number(double v);

// Strict double parse: trims spaces/tabs/CR, then requires from_chars to
// consume the whole remainder. Accepts nan/inf spellings.
std::optional<double> parse_double(std::string_view s);

// Split on sep without any quoting rules; empty fields are preserved.
std::vector<std::string_view> split(std::string_view s, char sep);

// Remove one trailing '\r' if present (CRLF input tolerance).
std::string_view strip_cr(std::string_view s);

}  // namespace wofz::format
