#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace corex::csv {

/// Parsed CSV file: header row plus data records. `row_lines[i]` is the
/// 1-based physical line on which record i starts (useful for error messages
/// when fields contain embedded newlines).
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines;
};

/// RFC-4180 parser. Accepts CRLF and LF record separators, quoted fields
/// with "" escapes and embedded newlines. The first record is the header.
/// Throws SchemaError on an unterminated quote or stray quote.
Table parse(std::string_view text);

Table read_file(const std::filesystem::path& path);

/// Quotes a field iff it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// Writes one record terminated by CRLF.
void write_row(std::ostream& out, std::span<const std::string> fields);

} // namespace corex::csv
