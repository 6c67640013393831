#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace collabnet {

// Splits one CSV line (RFC 4180 quoting, no embedded newlines).
// Returns nullopt on an unterminated quote or stray characters after a quote.
std::optional<std::vector<std::string>> split_csv_line(std::string_view line);

// Quotes a field when it contains a comma, quote, or newline.
std::string csv_escape(std::string_view field);

std::string join_csv(const std::vector<std::string>& fields);

// 6 significant digits, printf %g style. Every float written by the
// pipeline goes through this.
std::string format_double(double value);

// Shortest round-trip representation (17 significant digits at most).
std::string format_double_exact(double value);

}  // namespace collabnet
