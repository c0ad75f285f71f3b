#include "foodhazard/csv.hpp"

#include <fstream>
#include <sstream>

#include "foodhazard/error.hpp"

namespace foodhazard {

namespace {

char sniff_delimiter(std::string_view content) {
    // Inspect the header line only, ignoring quoted stretches.
    bool quoted = false;
    for (char c : content) {
        if (c == '"') quoted = !quoted;
        if (quoted) continue;
        if (c == '\n') break;
        if (c == '\t') return '\t';
    }
    return ',';
}

}  // namespace

Table parse_delimited(std::string_view content, Delimiter delimiter) {
    char delim = ',';
    switch (delimiter) {
        case Delimiter::Comma: delim = ','; break;
        case Delimiter::Tab: delim = '\t'; break;
        case Delimiter::Auto: delim = sniff_delimiter(content); break;
    }

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool row_started = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
        row_started = false;
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        char c = content[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
            row_started = true;
        } else if (c == delim) {
            end_field();
            row_started = true;
        } else if (c == '\n') {
            if (row_started || !field.empty()) end_row();
        } else if (c == '\r') {
            // swallowed; LF (or EOF) terminates the row
        } else {
            field.push_back(c);
            row_started = true;
        }
    }
    if (row_started || !field.empty()) end_row();

    Table table;
    if (!rows.empty()) {
        table.header = std::move(rows.front());
        table.rows.assign(std::make_move_iterator(rows.begin() + 1),
                          std::make_move_iterator(rows.end()));
    }
    return table;
}

Table read_delimited(const std::string& path, Delimiter delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_delimited(buf.str(), delimiter);
}

namespace {

void append_field(std::string& out, const std::string& value, char delim) {
    bool needs_quotes = value.find_first_of("\"\n\r") != std::string::npos ||
                        value.find(delim) != std::string::npos;
    if (!needs_quotes) {
        out += value;
        return;
    }
    out.push_back('"');
    for (char c : value) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
}

void append_row(std::string& out, const std::vector<std::string>& row, char delim) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) out.push_back(delim);
        append_field(out, row[i], delim);
    }
    out.push_back('\n');
}

}  // namespace

std::string format_delimited(const Table& table, char delimiter) {
    std::string out;
    append_row(out, table.header, delimiter);
    for (const auto& row : table.rows) append_row(out, row, delimiter);
    return out;
}

void write_delimited(const Table& table, const std::string& path, char delimiter) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write file: " + path);
    out << format_delimited(table, delimiter);
}

}  // namespace foodhazard
