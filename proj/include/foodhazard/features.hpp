#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace foodhazard {

enum class Analyzer { Word, Char };
enum class TokenFilter { Default, Stopword };

struct TfidfConfig {
    Analyzer analyzer = Analyzer::Word;
    TokenFilter tokenizer = TokenFilter::Default;
    int ngram_min = 1;
    int ngram_max = 1;
    int min_df = 1;
    double max_df = 1.0;      // fraction of documents
    std::size_t max_features = 10000;
    int min_token_len = 2;    // word analyzer: shortest kept alphanumeric run

    nlohmann::json to_json() const;
    static TfidfConfig from_json(const nlohmann::json& j);
};

// CSR matrix with L2-normalized rows (all-zero rows stay zero).
struct SparseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> row_ptr;  // rows + 1 entries
    std::vector<std::uint32_t> col;
    std::vector<double> val;

    SparseMatrix() : row_ptr(1, 0) {}

    std::size_t row_begin(std::size_t r) const { return row_ptr[r]; }
    std::size_t row_end(std::size_t r) const { return row_ptr[r + 1]; }
    double row_norm(std::size_t r) const;

    // Value at (r, c); absent entries are 0. Column indices are sorted per row.
    double at(std::size_t r, std::uint32_t c) const;
};

// Word analyzer: lowercase, maximal alphanumeric runs of >= min_token_len
// chars (stopword variant additionally drops the shipped English list).
// Char analyzer: one element, the lowercased string.
std::vector<std::string> tokenize(std::string_view text, const TfidfConfig& config);

// Tokens expanded to the configured n-gram range; word n-grams join tokens
// with single spaces, char n-grams span the whole string including spaces.
std::vector<std::string> analyze(std::string_view text, const TfidfConfig& config);

class TfidfModel {
public:
    // Vocabulary keeps n-grams with min_df <= df <= floor(max_df * n_docs),
    // truncated to max_features by (df desc, term asc); columns are assigned
    // in lexicographic term order. idf = ln((1 + N) / (1 + df)) + 1.
    static TfidfModel fit(const std::vector<std::string>& docs, const TfidfConfig& config);

    SparseMatrix transform(const std::vector<std::string>& docs) const;

    const TfidfConfig& config() const { return config_; }
    const std::vector<std::string>& terms() const { return terms_; }
    const std::vector<double>& idf() const { return idf_; }
    std::size_t document_count() const { return n_docs_; }
    double idf_of(std::string_view term) const;

    nlohmann::json to_json() const;
    static TfidfModel from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static TfidfModel load(const std::string& path);

private:
    TfidfConfig config_;
    std::vector<std::string> terms_;  // column order
    std::vector<double> idf_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::size_t n_docs_ = 0;
};

}  // namespace foodhazard
