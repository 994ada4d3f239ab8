#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace corex {

/// SHA-256 of a byte string, as 64 lowercase hex characters.
std::string sha256_hex(std::string_view data);

/// SHA-256 of a file's raw bytes.
std::string sha256_file(const std::filesystem::path& path);

/// FNV-1a 64-bit; used to derive per-stratum sub-seeds from string labels.
std::uint64_t fnv1a64(std::string_view data);

/// splitmix64 finalizer; decorrelates user seeds before feeding PRNGs.
std::uint64_t splitmix64(std::uint64_t x);

} // namespace corex
