#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "foodhazard/csv.hpp"

namespace foodhazard {

enum class Category { HazardCategory, ProductCategory, Hazard, Product };

inline constexpr std::array<Category, 4> kAllCategories = {
    Category::HazardCategory, Category::ProductCategory, Category::Hazard, Category::Product};

std::string to_string(Category category);
Category category_from_string(std::string_view name);

// One recall announcement with its four gold labels.
struct IncidentRecord {
    std::string id;
    std::string title;
    std::string text;
    std::string hazard_category;
    std::string product_category;
    std::string hazard;
    std::string product;
    bool is_synthetic = false;

    const std::string& label(Category category) const;
    std::string& label(Category category);

    bool operator==(const IncidentRecord&) const = default;
};

// Observed classes for one category over a record set. Classes are kept in
// lexicographic order so matrices and reports are reproducible.
struct LabelSpace {
    Category category = Category::HazardCategory;
    std::vector<std::string> classes;
    std::map<std::string, std::size_t> counts;

    std::size_t total() const;
};

struct DatasetSplit {
    std::vector<IncidentRecord> train;
    std::vector<IncidentRecord> dev;
    std::vector<IncidentRecord> test;
};

// Throws if splits overlap by id or if dev/test contain synthetic records.
void validate_split(const DatasetSplit& split);

struct RowIssue {
    std::size_t row = 0;  // 1-based data row number
    std::string id;
    std::string issue;
};

struct ValidationReport {
    std::vector<RowIssue> row_errors;
    std::size_t rows_total = 0;
    std::size_t rows_kept = 0;
    std::size_t rows_skipped = 0;
    std::size_t empty_title = 0;
    std::size_t empty_text = 0;

    nlohmann::json to_json() const;
};

struct LoadResult {
    std::vector<IncidentRecord> records;
    ValidationReport report;
};

// Requires title, text, and the four label columns; ids come from an "id"
// column (or an unnamed leading index column) when present, else from the
// row index. Rows with the wrong field count are skipped and logged.
LoadResult parse_corpus(const Table& table);
LoadResult load_corpus(const std::string& path, Delimiter delimiter = Delimiter::Auto);

Table corpus_to_table(const std::vector<IncidentRecord>& records);
void write_corpus(const std::vector<IncidentRecord>& records, const std::string& path,
                  char delimiter = ',');

// Strips HTML markup (inner text kept), replaces every match of
// [\t\n\r​]|//|&nbsp with a space, collapses whitespace runs, trims.
// Idempotent; never grows the input.
std::string clean_text(std::string_view raw);

IncidentRecord clean_record(IncidentRecord record);

LabelSpace compute_label_space(const std::vector<IncidentRecord>& records, Category category);

}  // namespace foodhazard
