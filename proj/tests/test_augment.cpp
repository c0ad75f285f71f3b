#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "foodhazard/augment.hpp"
#include "foodhazard/error.hpp"
#include "foodhazard/rng.hpp"
#include "support/oracles.hpp"

using namespace foodhazard;

namespace {

std::vector<IncidentRecord> class_corpus(const std::map<std::string, int>& counts,
                                         Category category) {
    std::vector<std::pair<std::string, std::string>> spec;
    int next_id = 0;
    for (const auto& [label, count] : counts) {
        for (int i = 0; i < count; ++i) spec.push_back({"r" + std::to_string(next_id++), label});
    }
    return oracles::tiny_corpus(spec, category);
}

std::vector<int> copies_for(const AugmentationPlan& plan, const std::string& cls) {
    for (const auto& c : plan.classes) {
        if (c.class_name == cls) {
            std::vector<int> out;
            for (const auto& item : c.items) out.push_back(item.copies);
            return out;
        }
    }
    return {};
}

SynonymDb test_db() {
    return SynonymDb::from_entries({
        {"unsafe", {"insecure"}},
        {"due", {"imputable"}},
        {"possible", {"potential"}},
        {"stella", {"Frank stella"}},
    });
}

}  // namespace

TEST_CASE("build_plan splits the budget with the remainder on the last source") {
    const auto train = class_corpus({{"A", 3}}, Category::Hazard);
    AugmentConfig config = AugmentConfig::preset(Category::HazardCategory, Technique::RW, 1);
    config.category = Category::Hazard;
    const LabelSpace space = compute_label_space(train, Category::Hazard);

    // hand trace: N = floor(200/3) = 66, last = 200 - 66*2 = 68
    const AugmentationPlan plan = build_plan(config, space, train);
    CHECK(copies_for(plan, "A") == std::vector<int>{66, 66, 68});
    CHECK(plan.total_copies() == 200);
}

TEST_CASE("classes at or above the threshold are not planned") {
    const auto train = class_corpus({{"A", 250}}, Category::Hazard);
    AugmentConfig config;
    config.category = Category::Hazard;
    config.threshold_tau = 200;
    config.total_samples = 200;
    const AugmentationPlan plan =
        build_plan(config, compute_label_space(train, Category::Hazard), train);
    CHECK(plan.classes.empty());
    CHECK(plan.total_copies() == 0);
}

TEST_CASE("a single source absorbs the whole budget") {
    const auto train = class_corpus({{"A", 1}}, Category::Hazard);
    AugmentConfig config;
    config.category = Category::Hazard;
    config.threshold_tau = 100;
    config.total_samples = 100;
    const AugmentationPlan plan =
        build_plan(config, compute_label_space(train, Category::Hazard), train);
    CHECK(copies_for(plan, "A") == std::vector<int>{100});
}

TEST_CASE("per-class budgets are exact for arbitrary supports") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::map<std::string, int> counts;
        const int n_classes = 1 + static_cast<int>(rng.index(6));
        for (int c = 0; c < n_classes; ++c) {
            counts["c" + std::to_string(c)] = 1 + static_cast<int>(rng.index(300));
        }
        const auto train = class_corpus(counts, Category::Product);
        AugmentConfig config;
        config.category = Category::Product;
        config.threshold_tau = 100;
        config.total_samples = 50;
        const AugmentationPlan plan =
            build_plan(config, compute_label_space(train, Category::Product), train);

        std::size_t expected_classes = 0;
        for (const auto& [cls, count] : counts) {
            if (count < config.threshold_tau) ++expected_classes;
        }
        CHECK(plan.classes.size() == expected_classes);
        for (const auto& cls : plan.classes) {
            int sum = 0;
            for (const auto& item : cls.items) {
                sum += item.copies;
                CHECK(item.copies >= 0);
            }
            CHECK(sum == config.total_samples);
            // every source but the last gets floor(S/m)
            const int per = config.total_samples / static_cast<int>(cls.items.size());
            for (std::size_t i = 0; i + 1 < cls.items.size(); ++i) {
                CHECK(cls.items[i].copies == per);
            }
        }
    }
}

TEST_CASE("plan JSON round trip") {
    const auto train = class_corpus({{"A", 3}, {"B", 7}}, Category::Hazard);
    AugmentConfig config;
    config.category = Category::Hazard;
    config.threshold_tau = 10;
    config.total_samples = 20;
    const AugmentationPlan plan =
        build_plan(config, compute_label_space(train, Category::Hazard), train);
    const AugmentationPlan back = AugmentationPlan::from_json(plan.to_json());
    CHECK(back.to_json() == plan.to_json());
    CHECK(back.total_copies() == plan.total_copies());
}

TEST_CASE("synonym_replace follows the published neighborhood") {
    const SynonymDb db = test_db();
    const std::string out = synonym_replace("unsafe due to possible presence", 1.0, db, 3);
    CHECK(out == "insecure imputable to potential presence");
}

TEST_CASE("synonym_replace leaves texts without database hits unchanged") {
    const SynonymDb db = test_db();
    CHECK(synonym_replace("no matches here at all", 0.5, db, 1) == "no matches here at all");
}

TEST_CASE("synonym_replace splices multi-word synonyms with database casing") {
    const SynonymDb db = test_db();
    const std::string out = synonym_replace("certain Stella artois", 1.0, db, 9);
    CHECK(out == "certain Frank stella artois");
}

TEST_CASE("synonym_replace is deterministic per seed") {
    const SynonymDb db = test_db();
    const std::string text = "unsafe due to possible presence of unsafe glass due to due";
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CHECK(synonym_replace(text, 0.4, db, seed) == synonym_replace(text, 0.4, db, seed));
    }
}

TEST_CASE("random_swap applies the illustrated adjacent transpositions") {
    // swap (2,3) then (1,2), zero-based: may be unsafe due -> may due be unsafe
    std::string step1 = "may be unsafe due";
    {
        auto words = split_words(step1);
        std::swap(words[2], words[3]);
        std::swap(words[1], words[2]);
        CHECK(join_words(words) == "may due be unsafe");
    }
}

TEST_CASE("random_swap conserves the token multiset") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::string text;
        const std::size_t len = rng.index(14);
        for (std::size_t i = 0; i < len; ++i) {
            text += "w" + std::to_string(rng.index(6));
            text += ' ';
        }
        const std::string swapped =
            random_swap(text, static_cast<int>(rng.index(5)), trial * 31 + 7);
        CHECK(oracles::token_multiset(swapped) == oracles::token_multiset(text));
    }
}

TEST_CASE("random_swap leaves single tokens alone") {
    CHECK(random_swap("alone", 3, 5) == "alone");
    CHECK(random_swap("", 3, 5) == "");
}

TEST_CASE("contextual_insert keeps the input as an ordered subsequence") {
    const TableInsertionProvider provider({}, {"very", "quite", "rather"});
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        std::string text;
        const std::size_t len = 1 + rng.index(10);
        for (std::size_t i = 0; i < len; ++i) {
            text += "t" + std::to_string(i);
            text += ' ';
        }
        const std::string out = contextual_insert(text, 0.3, provider, 5, trial);
        CHECK(oracles::is_subsequence(oracles::whitespace_tokens(text),
                                      oracles::whitespace_tokens(out)));
        CHECK(oracles::whitespace_tokens(out).size() >= oracles::whitespace_tokens(text).size());
    }
}

TEST_CASE("contextual_insert with rate zero is the identity") {
    const TableInsertionProvider provider({}, {"very"});
    CHECK(contextual_insert("certain stella artois brand beer", 0.0, provider, 5, 1) ==
          "certain stella artois brand beer");
}

TEST_CASE("positions without candidates are skipped") {
    const TableInsertionProvider provider({}, {});  // never yields candidates
    CHECK(contextual_insert("a b c d e", 1.0, provider, 5, 2) == "a b c d e");
}

TEST_CASE("table provider keys on the token left of the gap") {
    const TableInsertionProvider provider({{"beer", {"lager"}}}, {});
    const std::string out = contextual_insert("beer", 1.0, provider, 5, 4);
    const bool inserted_after = out == "beer lager";
    const bool skipped_before = out == "beer";  // gap 0 has no left token
    CHECK((inserted_after || skipped_before));
}

TEST_CASE("apply_plan copies labels and honors the budget") {
    const auto train = class_corpus({{"A", 3}, {"B", 9}}, Category::Hazard);
    AugmentConfig config;
    config.category = Category::Hazard;
    config.threshold_tau = 5;
    config.total_samples = 6;
    config.technique = Technique::RW;
    config.seed = 77;
    const LabelSpace space = compute_label_space(train, Category::Hazard);
    const AugmentationPlan plan = build_plan(config, space, train);
    const auto synthetic = apply_plan(plan, config, train, {});

    CHECK(synthetic.size() == 6);  // only class A is a minority
    std::map<std::string, const IncidentRecord*> originals;
    for (const auto& r : train) originals[r.id] = &r;
    for (const auto& r : synthetic) {
        CHECK(r.is_synthetic);
        const std::string source_id = r.id.substr(0, r.id.find("-s"));
        const IncidentRecord& source = *originals.at(source_id);
        CHECK(r.hazard_category == source.hazard_category);
        CHECK(r.product_category == source.product_category);
        CHECK(r.hazard == source.hazard);
        CHECK(r.product == source.product);
        CHECK(oracles::token_multiset(r.text) == oracles::token_multiset(source.text));
        CHECK(oracles::token_multiset(r.title) == oracles::token_multiset(source.title));
    }
}

TEST_CASE("apply_plan with an empty plan yields nothing") {
    const auto train = class_corpus({{"A", 250}}, Category::Hazard);
    AugmentConfig config;
    config.category = Category::Hazard;
    config.technique = Technique::RW;
    const AugmentationPlan plan =
        build_plan(config, compute_label_space(train, Category::Hazard), train);
    CHECK(apply_plan(plan, config, train, {}).empty());
}

TEST_CASE("apply_plan is byte-for-byte deterministic") {
    const auto train = class_corpus({{"A", 4}}, Category::Hazard);
    AugmentConfig config;
    config.category = Category::Hazard;
    config.threshold_tau = 10;
    config.total_samples = 12;
    config.technique = Technique::SR;
    config.rate = 0.6;
    config.seed = 123;
    const SynonymDb db = SynonymDb::from_entries(
        {{"beer", {"lager", "ale"}}, {"unsafe", {"insecure", "risky"}}});
    AugmenterProvider provider;
    provider.synonyms = &db;

    const LabelSpace space = compute_label_space(train, Category::Hazard);
    const AugmentationPlan plan = build_plan(config, space, train);
    const auto first = apply_plan(plan, config, train, provider);
    const auto second = apply_plan(plan, config, train, provider);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) CHECK(first[i] == second[i]);

    AugmentConfig other = config;
    other.seed = 124;
    const auto different = apply_plan(plan, other, train, provider);
    bool any_change = false;
    for (std::size_t i = 0; i < first.size(); ++i) {
        if (!(first[i] == different[i])) any_change = true;
    }
    CHECK(any_change);
}

TEST_CASE("SR without a database is a configuration error") {
    const auto train = class_corpus({{"A", 1}}, Category::Hazard);
    AugmentConfig config;
    config.category = Category::Hazard;
    config.technique = Technique::SR;
    const AugmentationPlan plan =
        build_plan(config, compute_label_space(train, Category::Hazard), train);
    CHECK_THROWS_AS(apply_plan(plan, config, train, {}), ConfigError);

    const SynonymDb empty = SynonymDb::from_entries({});
    AugmenterProvider provider;
    provider.synonyms = &empty;
    CHECK_THROWS_AS(apply_plan(plan, config, train, provider), ConfigError);
}

TEST_CASE("synonym database loader parses the flat export") {
    const auto path = std::filesystem::temp_directory_path() / "fh_syn.tsv";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "unsafe\tinsecure,risky\n";
        out << "BEER\tlager\n";
        out << "malformed-line-without-tab\n";
    }
    const SynonymDb db = SynonymDb::load(path.string());
    CHECK(db.size() == 2);
    REQUIRE(db.lookup("unsafe") != nullptr);
    CHECK(db.lookup("unsafe")->size() == 2);
    CHECK(db.lookup("Beer") != nullptr);  // lowercase keys, case-folded lookup
    CHECK(db.lookup("absent") == nullptr);
    std::filesystem::remove(path);
}

TEST_CASE("embedding provider ranks neighbors by cosine against the context") {
    const auto path = std::filesystem::temp_directory_path() / "fh_vec.txt";
    {
        std::ofstream out(path);
        out << "5 2\n";
        out << "beer 1.0 0.0\n";
        out << "lager 0.9 0.1\n";
        out << "ale 0.8 0.2\n";
        out << "carpet -1.0 0.0\n";
        out << "rug -0.9 -0.1\n";
    }
    const EmbeddingNeighborProvider provider = EmbeddingNeighborProvider::load(path.string());
    CHECK(provider.vocabulary_size() == 5);
    std::vector<std::string> left{"beer"};
    const auto top = provider.candidates({left, {}, {}}, 2);
    REQUIRE(top.size() == 2);
    CHECK(top[0] == "lager");
    CHECK(top[1] == "ale");
    std::filesystem::remove(path);
}

TEST_CASE("file provider keys candidates on the record id") {
    const auto path = std::filesystem::temp_directory_path() / "fh_cand.json";
    {
        std::ofstream out(path);
        out << R"({"rec7": ["notable", "judged"]})";
    }
    const FileCandidateProvider provider = FileCandidateProvider::load(path.string());
    CHECK(provider.candidates({{}, {}, "rec7"}, 5).size() == 2);
    CHECK(provider.candidates({{}, {}, "other"}, 5).empty());
    std::filesystem::remove(path);
}

TEST_CASE("post-augmentation supports rise by the full budget") {
    const auto train = class_corpus({{"A", 3}, {"B", 50}, {"C", 260}}, Category::HazardCategory);
    AugmentConfig config = AugmentConfig::preset(Category::HazardCategory, Technique::RW, 5);
    const LabelSpace before = compute_label_space(train, Category::HazardCategory);
    const AugmentationPlan plan = build_plan(config, before, train);
    auto combined = train;
    for (auto& r : apply_plan(plan, config, train, {})) combined.push_back(std::move(r));
    const LabelSpace after = compute_label_space(combined, Category::HazardCategory);
    CHECK(after.counts.at("A") == 203);
    CHECK(after.counts.at("B") == 250);
    CHECK(after.counts.at("C") == 260);
}

TEST_CASE("class support stats match the published table shape") {
    std::map<std::string, std::size_t> counts;
    counts["a"] = 3;
    counts["b"] = 50;
    counts["c"] = 250;
    counts["d"] = 101;
    LabelSpace space;
    space.category = Category::HazardCategory;
    for (const auto& [cls, count] : counts) space.classes.push_back(cls);
    space.counts = counts;

    const DistributionStats stats = class_support_stats(space);
    CHECK(stats.count == 4);
    CHECK(stats.total == 404);
    CHECK(stats.mean == doctest::Approx(101.0));
    CHECK(stats.min == 3);
    CHECK(stats.max == 250);
    // linear interpolation quartiles over [3, 50, 101, 250]
    CHECK(stats.q25 == doctest::Approx(38.25));
    CHECK(stats.q50 == doctest::Approx(75.5));
    CHECK(stats.q75 == doctest::Approx(138.25));
    CHECK(stats.stddev == doctest::Approx(std::sqrt((9604.0 + 2601.0 + 0.0 + 22201.0) / 3.0)));
}
