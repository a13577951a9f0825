#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace saft {

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

std::string to_lower(std::string_view s);

/// Maximal runs of [A-Za-z0-9], lowercased. Used by the full-text index
/// and by keyword derivation.
std::vector<std::string> tokenize_lower(std::string_view s);

/// Replace every character outside [A-Za-z0-9] with '_', collapse runs,
/// trim edge underscores. Empty input falls back to "node".
std::string sanitize_identifier(std::string_view s);

std::string trim(std::string_view s);

/// Double-quoted literal with backslash escapes, the inverse of the lexer.
std::string quote_string(std::string_view s);

/// Split on a separator, no trimming.
std::vector<std::string> split(std::string_view s, char sep);

bool glob_match(std::string_view pattern, std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace saft
