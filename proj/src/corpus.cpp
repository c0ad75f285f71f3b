#include "foodhazard/corpus.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "foodhazard/error.hpp"

namespace foodhazard {

std::string to_string(Category category) {
    switch (category) {
        case Category::HazardCategory: return "hazard-category";
        case Category::ProductCategory: return "product-category";
        case Category::Hazard: return "hazard";
        case Category::Product: return "product";
    }
    return "hazard-category";
}

Category category_from_string(std::string_view name) {
    for (Category c : kAllCategories) {
        if (to_string(c) == name) return c;
    }
    throw ConfigError("unknown label category: " + std::string(name));
}

const std::string& IncidentRecord::label(Category category) const {
    switch (category) {
        case Category::HazardCategory: return hazard_category;
        case Category::ProductCategory: return product_category;
        case Category::Hazard: return hazard;
        case Category::Product: return product;
    }
    return hazard_category;
}

std::string& IncidentRecord::label(Category category) {
    return const_cast<std::string&>(static_cast<const IncidentRecord&>(*this).label(category));
}

std::size_t LabelSpace::total() const {
    std::size_t n = 0;
    for (const auto& [cls, count] : counts) n += count;
    return n;
}

void validate_split(const DatasetSplit& split) {
    std::unordered_set<std::string> seen;
    auto check = [&](const std::vector<IncidentRecord>& records, const char* name, bool allow_synthetic) {
        for (const auto& r : records) {
            if (!seen.insert(r.id).second) {
                throw ConfigError(std::string("duplicate id across splits: ") + r.id);
            }
            if (r.is_synthetic && !allow_synthetic) {
                throw ConfigError(std::string("synthetic record outside train split (") + name +
                                  "): " + r.id);
            }
        }
    };
    check(split.train, "train", true);
    check(split.dev, "dev", false);
    check(split.test, "test", false);
}

nlohmann::json ValidationReport::to_json() const {
    nlohmann::json errors = nlohmann::json::array();
    for (const auto& e : row_errors) {
        errors.push_back({{"row", e.row}, {"id", e.id}, {"issue", e.issue}});
    }
    return nlohmann::json{
        {"row_errors", errors},
        {"counts",
         {{"rows_total", rows_total},
          {"rows_kept", rows_kept},
          {"rows_skipped", rows_skipped},
          {"empty_title", empty_title},
          {"empty_text", empty_text}}}};
}

namespace {

constexpr const char* kRequired[] = {"title", "text", "hazard-category",
                                     "product-category", "hazard", "product"};

bool parse_bool(const std::string& s) {
    return s == "1" || s == "true" || s == "True" || s == "TRUE";
}

}  // namespace

LoadResult parse_corpus(const Table& table) {
    for (const char* name : kRequired) {
        if (table.column(name) == Table::npos) {
            throw IngestError(std::string("missing required column: ") + name);
        }
    }
    std::size_t id_col = table.column("id");
    if (id_col == Table::npos && !table.header.empty() && table.header.front().empty()) {
        id_col = 0;  // unnamed leading index column
    }
    const std::size_t synth_col = table.column("is_synthetic");
    const std::size_t title_col = table.column("title");
    const std::size_t text_col = table.column("text");
    std::array<std::size_t, 4> label_cols{};
    for (std::size_t i = 0; i < kAllCategories.size(); ++i) {
        label_cols[i] = table.column(to_string(kAllCategories[i]));
    }

    LoadResult out;
    out.report.rows_total = table.rows.size();
    out.records.reserve(table.rows.size());

    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::size_t line = i + 1;
        if (row.size() != table.header.size()) {
            out.report.rows_skipped++;
            out.report.row_errors.push_back(
                {line, "", "malformed row: expected " + std::to_string(table.header.size()) +
                               " fields, got " + std::to_string(row.size())});
            continue;
        }
        IncidentRecord rec;
        rec.id = id_col != Table::npos ? row[id_col] : std::to_string(i);
        rec.title = row[title_col];
        rec.text = row[text_col];
        for (std::size_t c = 0; c < kAllCategories.size(); ++c) {
            rec.label(kAllCategories[c]) = row[label_cols[c]];
        }
        if (synth_col != Table::npos) rec.is_synthetic = parse_bool(row[synth_col]);

        if (rec.title.empty()) {
            out.report.empty_title++;
            out.report.row_errors.push_back({line, rec.id, "empty title"});
        }
        if (rec.text.empty()) {
            out.report.empty_text++;
            out.report.row_errors.push_back({line, rec.id, "empty text"});
        }
        out.records.push_back(std::move(rec));
        out.report.rows_kept++;
    }
    return out;
}

LoadResult load_corpus(const std::string& path, Delimiter delimiter) {
    return parse_corpus(read_delimited(path, delimiter));
}

Table corpus_to_table(const std::vector<IncidentRecord>& records) {
    Table table;
    table.header = {"id",     "title",   "text",    "hazard-category",
                    "product-category", "hazard", "product", "is_synthetic"};
    table.rows.reserve(records.size());
    for (const auto& r : records) {
        table.rows.push_back({r.id, r.title, r.text, r.hazard_category, r.product_category,
                              r.hazard, r.product, r.is_synthetic ? "true" : "false"});
    }
    return table;
}

void write_corpus(const std::vector<IncidentRecord>& records, const std::string& path,
                  char delimiter) {
    write_delimited(corpus_to_table(records), path, delimiter);
}

namespace {

bool is_space_byte(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Tag stripping equivalent to replacing <[^>]*> with a space.
std::string strip_markup(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        if (raw[i] == '<') {
            std::size_t close = raw.find('>', i + 1);
            if (close != std::string_view::npos) {
                out.push_back(' ');
                i = close + 1;
                continue;
            }
        }
        out.push_back(raw[i]);
        ++i;
    }
    return out;
}

// The published special-character pattern: [\t\n\r​]|//|&nbsp
// ("&nbsp" without a trailing semicolon is the literal pattern).
std::string replace_special(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == '\t' || c == '\n' || c == '\r') {
            out.push_back(' ');
            ++i;
        } else if (s.compare(i, 3, "\xe2\x80\x8b") == 0) {  // U+200B zero width space
            out.push_back(' ');
            i += 3;
        } else if (s.compare(i, 2, "//") == 0) {
            out.push_back(' ');
            i += 2;
        } else if (s.compare(i, 5, "&nbsp") == 0) {
            out.push_back(' ');
            i += 5;
        } else {
            out.push_back(c);
            ++i;
        }
    }
    return out;
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (is_space_byte(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::string clean_text(std::string_view raw) {
    return collapse_whitespace(replace_special(strip_markup(raw)));
}

IncidentRecord clean_record(IncidentRecord record) {
    record.title = clean_text(record.title);
    record.text = clean_text(record.text);
    return record;
}

LabelSpace compute_label_space(const std::vector<IncidentRecord>& records, Category category) {
    if (records.empty()) throw ConfigError("cannot build a label space from zero records");
    LabelSpace space;
    space.category = category;
    for (const auto& r : records) space.counts[r.label(category)]++;
    space.classes.reserve(space.counts.size());
    for (const auto& [cls, count] : space.counts) space.classes.push_back(cls);
    return space;
}

}  // namespace foodhazard
