#include "corex/numfmt.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace corex {

std::string format_double(double value) {
    if (value == 0.0) return "0"; // fold -0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

std::string format_fixed(double value, int decimals, bool comma_decimal) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    std::string out(buf);
    if (out == "-0" || out.rfind("-0.", 0) == 0) {
        // normalize negative zero renderings like "-0.00"
        bool all_zero = true;
        for (char c : out)
            if (c != '-' && c != '0' && c != '.') all_zero = false;
        if (all_zero) out.erase(out.begin());
    }
    if (comma_decimal) {
        for (char& c : out)
            if (c == '.') c = ',';
    }
    return out;
}

} // namespace corex
