#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "foodhazard/corpus.hpp"
#include "foodhazard/error.hpp"
#include "foodhazard/rng.hpp"
#include "support/oracles.hpp"

using namespace foodhazard;

TEST_CASE("clean_text strips markup and keeps inner text") {
    CHECK(clean_text("<p>Hello <b>world</b></p>") == "Hello world");
    CHECK(clean_text("a\tb\nc") == "a b c");
    CHECK(clean_text("hello world") == "hello world");
    // "&nbsp" without the trailing semicolon is the literal published
    // pattern, so the ";" survives.
    CHECK(clean_text("path//to&nbsp;x") == "path to ;x");
}

TEST_CASE("clean_text handles the zero width space and CR") {
    CHECK(clean_text("a\xe2\x80\x8b\x62") == "a b");
    CHECK(clean_text("a\r\nb") == "a b");
    CHECK(clean_text("  padded\t ") == "padded");
    CHECK(clean_text("") == "");
}

TEST_CASE("clean_text is idempotent and never grows") {
    Rng rng(97);
    const std::string alphabet = "ab <>/&nbsp;\t\n\rx\xe2\x80\x8b\"z";
    for (int trial = 0; trial < 1000; ++trial) {
        std::string raw;
        const std::size_t len = rng.index(60);
        for (std::size_t i = 0; i < len; ++i) raw.push_back(alphabet[rng.index(alphabet.size())]);
        const std::string once = clean_text(raw);
        CHECK(once.size() <= raw.size());
        CHECK(clean_text(once) == once);
    }
}

namespace {

Table records_table() {
    Table t;
    t.header = {"id", "title", "text", "hazard-category", "product-category", "hazard", "product"};
    t.rows = {
        {"a1", "Beer recall", "glass in beer", "physical", "beverages", "glass", "beer"},
        {"a2", "Nut warning", "undeclared peanut", "allergens", "snacks", "peanut", "bar"},
        {"a3", "Cheese alert", "listeria found", "biological", "dairy", "listeria", "cheese"},
    };
    return t;
}

}  // namespace

TEST_CASE("parse_corpus keeps well-formed rows with an empty report") {
    const LoadResult out = parse_corpus(records_table());
    REQUIRE(out.records.size() == 3);
    CHECK(out.report.row_errors.empty());
    CHECK(out.records[0].id == "a1");
    CHECK(out.records[1].hazard == "peanut");
    CHECK_FALSE(out.records[2].is_synthetic);
}

TEST_CASE("parse_corpus names the missing column") {
    Table t = records_table();
    t.header[5] = "hazard_wrong";
    for (auto& row : t.rows) row.resize(t.header.size());
    CHECK_THROWS_WITH_AS(parse_corpus(t), "missing required column: hazard", IngestError);
}

TEST_CASE("empty text is kept but flagged") {
    Table t = records_table();
    t.rows.resize(1);
    t.rows[0][2] = "";
    const LoadResult out = parse_corpus(t);
    REQUIRE(out.records.size() == 1);
    CHECK(out.report.empty_text == 1);
    REQUIRE(out.report.row_errors.size() == 1);
    CHECK(out.report.row_errors[0].id == "a1");
}

TEST_CASE("malformed rows are skipped and logged") {
    Table t = records_table();
    t.rows[1].pop_back();
    const LoadResult out = parse_corpus(t);
    CHECK(out.records.size() == 2);
    CHECK(out.report.rows_skipped == 1);
    REQUIRE(out.report.row_errors.size() == 1);
    CHECK(out.report.row_errors[0].row == 2);
}

TEST_CASE("ids fall back to the row index") {
    Table t = records_table();
    t.header.erase(t.header.begin());
    for (auto& row : t.rows) row.erase(row.begin());
    const LoadResult out = parse_corpus(t);
    CHECK(out.records[0].id == "0");
    CHECK(out.records[2].id == "2");
}

TEST_CASE("round trip preserves every field") {
    Rng rng(41);
    const std::string alphabet = "ab,\"\n\tc d;&//";
    std::vector<IncidentRecord> records;
    for (int i = 0; i < 25; ++i) {
        IncidentRecord r;
        r.id = "rec" + std::to_string(i);
        auto rand_string = [&] {
            std::string s;
            const std::size_t len = rng.index(12);
            for (std::size_t k = 0; k < len; ++k) s.push_back(alphabet[rng.index(alphabet.size())]);
            return s;
        };
        r.title = rand_string();
        r.text = rand_string();
        r.hazard_category = "hc" + std::to_string(rng.index(3));
        r.product_category = "pc" + std::to_string(rng.index(3));
        r.hazard = rand_string();
        r.product = rand_string();
        r.is_synthetic = rng.index(2) == 1;
        records.push_back(std::move(r));
    }
    const auto path = std::filesystem::temp_directory_path() / "fh_roundtrip.csv";
    write_corpus(records, path.string());
    const LoadResult out = load_corpus(path.string());
    REQUIRE(out.records.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) CHECK(out.records[i] == records[i]);
    std::filesystem::remove(path);
}

TEST_CASE("tab separated input is sniffed") {
    const std::string content =
        "id\ttitle\ttext\thazard-category\tproduct-category\thazard\tproduct\n"
        "x\tT\tbody text\th\tp\thz\tpr\n";
    const LoadResult out = parse_corpus(parse_delimited(content));
    REQUIRE(out.records.size() == 1);
    CHECK(out.records[0].text == "body text");
}

TEST_CASE("compute_label_space counts and sorts classes") {
    const auto records = oracles::tiny_corpus(
        {{"1", "A"}, {"2", "A"}, {"3", "B"}, {"4", "A"}}, Category::Hazard);
    const LabelSpace space = compute_label_space(records, Category::Hazard);
    CHECK(space.classes == std::vector<std::string>{"A", "B"});
    CHECK(space.counts.at("A") == 3);
    CHECK(space.counts.at("B") == 1);
    CHECK(space.total() == 4);

    for (Category category : kAllCategories) {
        const LabelSpace s = compute_label_space(records, category);
        CHECK(s.total() == records.size());
    }
    CHECK_THROWS_AS(compute_label_space({}, Category::Hazard), ConfigError);
}

TEST_CASE("validate_split rejects overlap and synthetic leakage") {
    DatasetSplit split;
    split.train = oracles::tiny_corpus({{"1", "A"}, {"2", "B"}}, Category::Hazard);
    split.dev = oracles::tiny_corpus({{"3", "A"}}, Category::Hazard);
    split.test = oracles::tiny_corpus({{"4", "B"}}, Category::Hazard);
    CHECK_NOTHROW(validate_split(split));

    split.train[1].is_synthetic = true;
    CHECK_NOTHROW(validate_split(split));

    DatasetSplit overlapping = split;
    overlapping.dev[0].id = "1";
    CHECK_THROWS_AS(validate_split(overlapping), ConfigError);

    DatasetSplit leaking = split;
    leaking.test[0].is_synthetic = true;
    CHECK_THROWS_AS(validate_split(leaking), ConfigError);
}
