#pragma once

#define COREX_VERSION "0.1.0"

namespace corex {
inline constexpr const char* version() { return COREX_VERSION; }
}
