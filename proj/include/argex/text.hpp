#pragma once

#include <string>
#include <string_view>

namespace argex {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

/// Strict double parser; throws std::runtime_error on trailing garbage.
double parse_double(std::string_view text);

/// ASCII-only lowercasing; non-ASCII bytes pass through untouched.
std::string to_lower_ascii(std::string_view text);

} // namespace argex
