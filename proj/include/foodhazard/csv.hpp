#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace foodhazard {

enum class Delimiter { Auto, Comma, Tab };

// In-memory view of a delimited table. Rows are kept verbatim; schema
// decisions (required columns, row skipping) belong to the caller.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return npos;
    }
};

// RFC-4180 style parsing: quoted fields, doubled quotes, embedded
// delimiters and newlines inside quotes, CRLF or LF row endings.
Table parse_delimited(std::string_view content, Delimiter delimiter = Delimiter::Auto);
Table read_delimited(const std::string& path, Delimiter delimiter = Delimiter::Auto);

std::string format_delimited(const Table& table, char delimiter = ',');
void write_delimited(const Table& table, const std::string& path, char delimiter = ',');

}  // namespace foodhazard
