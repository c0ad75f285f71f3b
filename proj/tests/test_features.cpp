#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "foodhazard/error.hpp"
#include "foodhazard/features.hpp"
#include "foodhazard/rng.hpp"
#include "foodhazard/stopwords.hpp"

using namespace foodhazard;

namespace {

TfidfConfig word_config() {
    TfidfConfig c;
    c.min_token_len = 1;  // single-letter corpora below
    return c;
}

}  // namespace

TEST_CASE("word tokenizer lowercases and keeps alphanumeric runs") {
    TfidfConfig c;
    CHECK(tokenize("Beer may be unsafe!", c) ==
          std::vector<std::string>{"beer", "may", "be", "unsafe"});
    CHECK(tokenize("x 12ab x", c) == std::vector<std::string>{"12ab"});  // default min length 2
    CHECK(tokenize("", c).empty());
}

TEST_CASE("stopword variant drops exactly the shipped list") {
    TfidfConfig c;
    c.tokenizer = TokenFilter::Stopword;
    CHECK(tokenize("Beer may be unsafe!", c) == std::vector<std::string>{"beer", "unsafe"});

    // oracle: membership check against the shipped stopword list
    TfidfConfig plain;
    for (const auto& token : tokenize("the product was recalled because of glass", plain)) {
        const auto filtered = tokenize(token, c);
        if (is_stopword(token)) {
            CHECK(filtered.empty());
        } else {
            CHECK(filtered == std::vector<std::string>{token});
        }
    }
}

TEST_CASE("char analyzer emits every n-gram of the lowercased string") {
    TfidfConfig c;
    c.analyzer = Analyzer::Char;
    c.ngram_min = 1;
    c.ngram_max = 2;
    const auto grams = analyze("ab", c);
    const std::set<std::string> got(grams.begin(), grams.end());
    CHECK(got == std::set<std::string>{"a", "b", "ab"});

    const auto spaced = analyze("A b", c);
    CHECK(std::find(spaced.begin(), spaced.end(), " b") != spaced.end());  // spans spaces
}

TEST_CASE("word n-grams join tokens with spaces") {
    TfidfConfig c;
    c.ngram_min = 1;
    c.ngram_max = 2;
    const auto grams = analyze("beer may be", c);
    CHECK(std::find(grams.begin(), grams.end(), "beer may") != grams.end());
    CHECK(std::find(grams.begin(), grams.end(), "may be") != grams.end());
}

TEST_CASE("fit reproduces the smoothed idf by hand") {
    const std::vector<std::string> docs{"a b", "a"};
    const TfidfModel model = TfidfModel::fit(docs, word_config());
    REQUIRE(model.terms() == std::vector<std::string>{"a", "b"});
    // idf(t) = ln((1 + N) / (1 + df)) + 1 with N = 2
    CHECK(model.idf_of("a") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(model.idf_of("b") == doctest::Approx(std::log(3.0 / 2.0) + 1.0).epsilon(1e-12));
}

TEST_CASE("min_df prunes rare terms") {
    TfidfConfig c = word_config();
    c.min_df = 2;
    const TfidfModel model = TfidfModel::fit({"a b", "a"}, c);
    CHECK(model.terms() == std::vector<std::string>{"a"});
}

TEST_CASE("max_features keeps the highest document frequency") {
    TfidfConfig c = word_config();
    c.max_features = 1;
    const TfidfModel model = TfidfModel::fit({"a b", "a"}, c);
    CHECK(model.terms() == std::vector<std::string>{"a"});
}

TEST_CASE("max_features ties break lexicographically") {
    TfidfConfig c = word_config();
    c.max_features = 2;
    const TfidfModel model = TfidfModel::fit({"c b a", "b a c"}, c);  // all df = 2
    CHECK(model.terms() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("max_df drops terms above the document-fraction cutoff") {
    TfidfConfig c = word_config();
    c.max_df = 0.5;  // floor(0.5 * 4) = 2 documents
    const TfidfModel model =
        TfidfModel::fit({"a b", "a b", "a c", "a d"}, c);
    const auto& terms = model.terms();
    CHECK(std::find(terms.begin(), terms.end(), "a") == terms.end());  // df 4 > 2
    CHECK(std::find(terms.begin(), terms.end(), "b") != terms.end());  // df 2 <= 2
}

TEST_CASE("transform applies tf * idf with row normalization") {
    const std::vector<std::string> docs{"a b", "a"};
    const TfidfModel model = TfidfModel::fit(docs, word_config());
    const SparseMatrix m = model.transform({"a a b"});

    // hand L2 normalization of (2 * 1.0, 1 * idf_b)
    const double idf_b = std::log(3.0 / 2.0) + 1.0;
    const double norm = std::sqrt(4.0 + idf_b * idf_b);
    REQUIRE(m.rows == 1);
    CHECK(m.at(0, 0) == doctest::Approx(2.0 / norm).epsilon(1e-12));
    CHECK(m.at(0, 1) == doctest::Approx(idf_b / norm).epsilon(1e-12));
    CHECK(m.row_norm(0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("empty and out-of-vocabulary docs become zero rows") {
    const TfidfModel model = TfidfModel::fit({"a b", "a"}, word_config());
    const SparseMatrix m = model.transform({"", "zz qq"});
    CHECK(m.row_norm(0) == 0.0);
    CHECK(m.row_norm(1) == 0.0);
    CHECK(m.row_begin(0) == m.row_end(0));
}

TEST_CASE("rows are unit norm or zero for random corpora") {
    Rng rng(23);
    std::vector<std::string> docs;
    for (int i = 0; i < 60; ++i) {
        std::string doc;
        const std::size_t len = rng.index(12);
        for (std::size_t w = 0; w < len; ++w) {
            doc += "tok" + std::to_string(rng.index(30));
            doc += ' ';
        }
        docs.push_back(doc);
    }
    TfidfConfig c;
    c.ngram_max = 2;
    const TfidfModel model = TfidfModel::fit(docs, c);
    const SparseMatrix m = model.transform(docs);
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double norm = m.row_norm(r);
        CHECK((std::fabs(norm - 1.0) < 1e-9 || norm == 0.0));
    }
}

TEST_CASE("idf never increases with document frequency") {
    Rng rng(29);
    std::vector<std::string> docs;
    for (int i = 0; i < 40; ++i) {
        std::string doc = "common ";
        if (rng.index(2) == 0) doc += "half ";
        if (rng.index(4) == 0) doc += "quarter ";
        docs.push_back(doc + "unique" + std::to_string(i));
    }
    const TfidfModel model = TfidfModel::fit(docs, TfidfConfig{});
    std::map<std::string, std::size_t> df;
    for (const auto& doc : docs) {
        std::set<std::string> seen;
        for (const auto& t : analyze(doc, model.config())) seen.insert(t);
        for (const auto& t : seen) df[t]++;
    }
    for (std::size_t i = 0; i < model.terms().size(); ++i) {
        for (std::size_t j = 0; j < model.terms().size(); ++j) {
            if (df.at(model.terms()[i]) < df.at(model.terms()[j])) {
                CHECK(model.idf()[i] >= model.idf()[j]);
            }
        }
    }
}

TEST_CASE("fitting is independent of document order") {
    std::vector<std::string> docs{"a b c", "b c d", "c d e", "a e"};
    TfidfConfig c = word_config();
    const TfidfModel forward = TfidfModel::fit(docs, c);
    std::reverse(docs.begin(), docs.end());
    const TfidfModel reversed = TfidfModel::fit(docs, c);
    CHECK(forward.terms() == reversed.terms());
    CHECK(forward.idf() == reversed.idf());
}

TEST_CASE("an empty vocabulary is a configuration error") {
    TfidfConfig c = word_config();
    c.min_df = 5;
    CHECK_THROWS_AS(TfidfModel::fit({"a b", "a"}, c), ConfigError);
    CHECK_THROWS_AS(TfidfModel::fit({}, c), ConfigError);
}

TEST_CASE("model sidecar round trips through JSON") {
    const TfidfModel model = TfidfModel::fit({"a b", "a"}, word_config());
    const TfidfModel back = TfidfModel::from_json(model.to_json());
    CHECK(back.terms() == model.terms());
    CHECK(back.idf() == model.idf());
    const SparseMatrix lhs = model.transform({"a a b"});
    const SparseMatrix rhs = back.transform({"a a b"});
    CHECK(lhs.val == rhs.val);
    CHECK(lhs.col == rhs.col);
}

TEST_CASE("fit and transform agree with reference-tooling values") {
    // frozen from the reference vectorizer on the same corpus and settings
    const std::vector<std::string> docs{
        "certain beer may be unsafe due to glass",
        "glass fragments found in beer bottles",
        "undeclared peanut in chocolate bars",
        "beer recall due to glass particles",
    };
    TfidfConfig c;
    c.ngram_min = 1;
    c.ngram_max = 2;
    const TfidfModel model = TfidfModel::fit(docs, c);
    CHECK(model.terms().size() == 37);
    CHECK(model.idf_of("beer") == doctest::Approx(1.2231435513142097).epsilon(1e-12));
    CHECK(model.idf_of("glass") == doctest::Approx(1.2231435513142097).epsilon(1e-12));
    CHECK(model.idf_of("beer may") == doctest::Approx(1.916290731874155).epsilon(1e-12));
    CHECK(model.idf_of("due to") == doctest::Approx(1.5108256237659907).epsilon(1e-12));
    CHECK(model.idf_of("peanut") == doctest::Approx(1.916290731874155).epsilon(1e-12));

    const SparseMatrix m = model.transform(docs);
    auto column = [&](const std::string& term) {
        const auto& terms = model.terms();
        return static_cast<std::uint32_t>(
            std::find(terms.begin(), terms.end(), term) - terms.begin());
    };
    CHECK(m.at(0, column("certain")) == doctest::Approx(0.28511916609476284).epsilon(1e-12));
    CHECK(m.at(0, column("beer")) == doctest::Approx(0.18198787040201395).epsilon(1e-12));
    CHECK(m.at(0, column("glass")) == doctest::Approx(0.18198787040201395).epsilon(1e-12));
    CHECK(m.at(0, column("due to")) == doctest::Approx(0.22479122546371946).epsilon(1e-12));
}

TEST_CASE("config validation rejects bad ranges") {
    nlohmann::json j{{"ngram_min", 3}, {"ngram_max", 2}};
    CHECK_THROWS_AS(TfidfConfig::from_json(j), ConfigError);
    CHECK_THROWS_AS(TfidfConfig::from_json(nlohmann::json{{"min_df", 0}}), ConfigError);
    CHECK_THROWS_AS(TfidfConfig::from_json(nlohmann::json{{"max_df", 0.0}}), ConfigError);

    const TfidfConfig c =
        TfidfConfig::from_json(nlohmann::json{{"analyzer", "char"}, {"ngram_range", {2, 4}}});
    CHECK(c.analyzer == Analyzer::Char);
    CHECK(c.ngram_min == 2);
    CHECK(c.ngram_max == 4);
}
