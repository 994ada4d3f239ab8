#include "corex/csv.hpp"

#include <fstream>
#include <sstream>

#include "corex/error.hpp"

namespace corex::csv {

Table parse(std::string_view text) {
    Table table;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool record_has_content = false;
    std::size_t line = 1;
    std::size_t record_start_line = 1;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        if (table.header.empty() && table.rows.empty() && table.row_lines.empty()) {
            table.header = std::move(record);
        } else {
            table.rows.push_back(std::move(record));
            table.row_lines.push_back(record_start_line);
        }
        record.clear();
        record_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty() || field_was_quoted) {
                throw SchemaError("csv: stray quote in unquoted field at line " +
                                  std::to_string(line));
            }
            in_quotes = true;
            field_was_quoted = true;
            record_has_content = true;
            break;
        case ',':
            end_field();
            record_has_content = true;
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
            [[fallthrough]];
        case '\n':
            end_record();
            ++line;
            record_start_line = line;
            break;
        default:
            field += c;
            record_has_content = true;
            break;
        }
    }
    if (in_quotes) {
        throw SchemaError("csv: unterminated quoted field starting before line " +
                          std::to_string(line));
    }
    // Final record without trailing newline.
    if (record_has_content || !record.empty()) end_record();
    return table;
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string escape(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out += '"';
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << "\r\n";
}

} // namespace corex::csv
