#pragma once

#include <string>

namespace wdt {

// Shortest decimal string that round-trips the exact double (to_chars); used
// everywhere a float is persisted or printed so output bytes are stable.
std::string format_double(double v);

// Strict full-string parse; throws IoFailure on trailing garbage.
double parse_double(const std::string& s);

}  // namespace wdt
