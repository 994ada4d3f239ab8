#pragma once

#include <string>

namespace corex {

/// Shortest round-trip decimal form of a double ("0.1", "35.21", "1e-09").
/// Every machine-readable artifact uses this so output is byte-stable.
std::string format_double(double value);

/// Fixed-precision form for display tables ("64.50" for decimals=2).
/// When `comma_decimal` is set the decimal point renders as ','.
std::string format_fixed(double value, int decimals, bool comma_decimal = false);

} // namespace corex
