#pragma once

#include <string>
#include <string_view>

namespace expotail::fmt {

/// 17 significant digits, so every finite double round-trips. Non-finite values
/// render as "inf", "-inf" or "nan".
std::string number(double x);

/// JSON number token; non-finite values become null.
std::string json_number(double x);

std::string json_string(std::string_view s);

} // namespace expotail::fmt
