#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hybridcast::csv {

/// Splits one CSV record. Double-quoted fields may contain commas and `""` escapes.
std::vector<std::string> split_record(std::string_view line);

/// Quotes a field only when it contains a comma, quote or line break.
std::string quote(std::string_view field);

/// Splits text into lines, dropping a trailing `\r` from each and the final empty line.
std::vector<std::string_view> lines(std::string_view text);

/// Locale-independent strict double parse; throws DataError naming `what` on failure.
double parse_double(std::string_view field, std::string_view what);

/// Fixed-point rendering with `decimals` digits, never producing "-0.000...".
std::string fixed(double value, int decimals);

/// Shortest round-trippable decimal rendering.
std::string shortest(double value);

}  // namespace hybridcast::csv
