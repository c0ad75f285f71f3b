#include "foodhazard/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>

#include "foodhazard/error.hpp"
#include "foodhazard/stopwords.hpp"

namespace foodhazard {

namespace {

const char* analyzer_name(Analyzer a) { return a == Analyzer::Word ? "word" : "char"; }
const char* tokenizer_name(TokenFilter t) {
    return t == TokenFilter::Default ? "default" : "stopword-filtering";
}

Analyzer analyzer_from(const std::string& s) {
    if (s == "word") return Analyzer::Word;
    if (s == "char") return Analyzer::Char;
    throw ConfigError("unknown analyzer: " + s);
}

TokenFilter tokenizer_from(const std::string& s) {
    if (s == "default" || s == "-") return TokenFilter::Default;
    if (s == "stopword-filtering" || s == "stopword") return TokenFilter::Stopword;
    throw ConfigError("unknown tokenizer: " + s);
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_alnum(unsigned char c) { return std::isalnum(c) != 0; }

}  // namespace

nlohmann::json TfidfConfig::to_json() const {
    return nlohmann::json{{"analyzer", analyzer_name(analyzer)},
                          {"tokenizer", tokenizer_name(tokenizer)},
                          {"ngram_min", ngram_min},
                          {"ngram_max", ngram_max},
                          {"min_df", min_df},
                          {"max_df", max_df},
                          {"max_features", max_features},
                          {"min_token_len", min_token_len}};
}

TfidfConfig TfidfConfig::from_json(const nlohmann::json& j) {
    TfidfConfig c;
    if (j.contains("analyzer")) c.analyzer = analyzer_from(j.at("analyzer").get<std::string>());
    if (j.contains("tokenizer")) c.tokenizer = tokenizer_from(j.at("tokenizer").get<std::string>());
    if (j.contains("ngram_min")) c.ngram_min = j.at("ngram_min").get<int>();
    if (j.contains("ngram_max")) c.ngram_max = j.at("ngram_max").get<int>();
    if (j.contains("ngram_range")) {
        c.ngram_min = j.at("ngram_range").at(0).get<int>();
        c.ngram_max = j.at("ngram_range").at(1).get<int>();
    }
    if (j.contains("min_df")) c.min_df = j.at("min_df").get<int>();
    if (j.contains("max_df")) c.max_df = j.at("max_df").get<double>();
    if (j.contains("max_features")) c.max_features = j.at("max_features").get<std::size_t>();
    if (j.contains("min_token_len")) c.min_token_len = j.at("min_token_len").get<int>();
    if (c.ngram_min < 1 || c.ngram_min > c.ngram_max) {
        throw ConfigError("invalid ngram range");
    }
    if (c.min_df < 1 || c.max_df <= 0.0 || c.max_df > 1.0 || c.max_features == 0) {
        throw ConfigError("invalid document-frequency cutoffs");
    }
    return c;
}

double SparseMatrix::row_norm(std::size_t r) const {
    double sq = 0.0;
    for (std::size_t i = row_begin(r); i < row_end(r); ++i) sq += val[i] * val[i];
    return std::sqrt(sq);
}

double SparseMatrix::at(std::size_t r, std::uint32_t c) const {
    auto first = col.begin() + static_cast<std::ptrdiff_t>(row_begin(r));
    auto last = col.begin() + static_cast<std::ptrdiff_t>(row_end(r));
    auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c) return 0.0;
    return val[static_cast<std::size_t>(it - col.begin())];
}

std::vector<std::string> tokenize(std::string_view text, const TfidfConfig& config) {
    if (config.analyzer == Analyzer::Char) {
        return {lowercase(text)};
    }
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (static_cast<int>(current.size()) >= config.min_token_len) {
            if (config.tokenizer != TokenFilter::Stopword || !is_stopword(current)) {
                tokens.push_back(current);
            }
        }
        current.clear();
    };
    for (char ch : text) {
        if (is_alnum(static_cast<unsigned char>(ch))) {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

std::vector<std::string> analyze(std::string_view text, const TfidfConfig& config) {
    std::vector<std::string> tokens = tokenize(text, config);
    std::vector<std::string> grams;
    if (config.analyzer == Analyzer::Char) {
        const std::string& s = tokens.front();
        for (int n = config.ngram_min; n <= config.ngram_max; ++n) {
            if (static_cast<std::size_t>(n) > s.size()) break;
            for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= s.size(); ++i) {
                grams.push_back(s.substr(i, static_cast<std::size_t>(n)));
            }
        }
        return grams;
    }
    for (int n = config.ngram_min; n <= config.ngram_max; ++n) {
        if (static_cast<std::size_t>(n) > tokens.size()) break;
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
            std::string gram = tokens[i];
            for (std::size_t j = 1; j < static_cast<std::size_t>(n); ++j) {
                gram += ' ';
                gram += tokens[i + j];
            }
            grams.push_back(std::move(gram));
        }
    }
    return grams;
}

TfidfModel TfidfModel::fit(const std::vector<std::string>& docs, const TfidfConfig& config) {
    if (docs.empty()) throw ConfigError("cannot fit TF-IDF on zero documents");

    std::map<std::string, std::size_t> df;  // ordered: ties resolve by term asc
    std::vector<std::string> doc_grams;
    for (const auto& doc : docs) {
        doc_grams = analyze(doc, config);
        std::sort(doc_grams.begin(), doc_grams.end());
        doc_grams.erase(std::unique(doc_grams.begin(), doc_grams.end()), doc_grams.end());
        for (auto& g : doc_grams) df[g]++;
    }

    const std::size_t n_docs = docs.size();
    const auto max_count =
        static_cast<std::size_t>(std::floor(config.max_df * static_cast<double>(n_docs)));

    std::vector<std::pair<const std::string*, std::size_t>> kept;
    for (const auto& [term, count] : df) {
        if (count < static_cast<std::size_t>(config.min_df) || count > max_count) continue;
        kept.emplace_back(&term, count);
    }
    if (kept.size() > config.max_features) {
        std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
            return a.second > b.second;  // df desc; stable keeps term asc within ties
        });
        kept.resize(config.max_features);
    }
    if (kept.empty()) {
        throw ConfigError("empty vocabulary after document-frequency cutoffs");
    }
    std::sort(kept.begin(), kept.end(),
              [](const auto& a, const auto& b) { return *a.first < *b.first; });

    TfidfModel model;
    model.config_ = config;
    model.n_docs_ = n_docs;
    model.terms_.reserve(kept.size());
    model.idf_.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        model.terms_.push_back(*kept[i].first);
        model.idf_.push_back(
            std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(kept[i].second))) +
            1.0);
        model.index_.emplace(model.terms_.back(), static_cast<std::uint32_t>(i));
    }
    return model;
}

SparseMatrix TfidfModel::transform(const std::vector<std::string>& docs) const {
    if (terms_.empty()) throw ConfigError("TF-IDF model is not fitted");
    SparseMatrix m;
    m.rows = docs.size();
    m.cols = terms_.size();
    m.row_ptr.assign(1, 0);

    std::map<std::uint32_t, double> row;  // ordered columns
    for (const auto& doc : docs) {
        row.clear();
        for (const auto& gram : analyze(doc, config_)) {
            auto it = index_.find(gram);
            if (it == index_.end()) continue;
            row[it->second] += idf_[it->second];  // tf accumulates one idf per occurrence
        }
        double sq = 0.0;
        for (const auto& [c, v] : row) sq += v * v;
        const double norm = std::sqrt(sq);
        for (const auto& [c, v] : row) {
            m.col.push_back(c);
            m.val.push_back(norm > 0.0 ? v / norm : 0.0);
        }
        m.row_ptr.push_back(m.col.size());
    }
    return m;
}

double TfidfModel::idf_of(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) throw ConfigError("term not in vocabulary: " + std::string(term));
    return idf_[it->second];
}

nlohmann::json TfidfModel::to_json() const {
    return nlohmann::json{{"format_version", 1},
                          {"kind", "tfidf"},
                          {"config", config_.to_json()},
                          {"n_docs", n_docs_},
                          {"vocabulary", terms_},
                          {"idf", idf_}};
}

TfidfModel TfidfModel::from_json(const nlohmann::json& j) {
    TfidfModel model;
    model.config_ = TfidfConfig::from_json(j.at("config"));
    model.n_docs_ = j.at("n_docs").get<std::size_t>();
    model.terms_ = j.at("vocabulary").get<std::vector<std::string>>();
    model.idf_ = j.at("idf").get<std::vector<double>>();
    if (model.terms_.size() != model.idf_.size()) {
        throw ConfigError("TF-IDF sidecar vocabulary/idf size mismatch");
    }
    for (std::size_t i = 0; i < model.terms_.size(); ++i) {
        model.index_.emplace(model.terms_[i], static_cast<std::uint32_t>(i));
    }
    return model;
}

void TfidfModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write TF-IDF sidecar: " + path);
    out << to_json().dump(2) << '\n';
}

TfidfModel TfidfModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read TF-IDF sidecar: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

}  // namespace foodhazard
