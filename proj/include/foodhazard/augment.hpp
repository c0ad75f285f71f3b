#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "foodhazard/corpus.hpp"

namespace foodhazard {

enum class Technique { SR, RW, CW };

std::string to_string(Technique technique);
Technique technique_from_string(std::string_view name);

struct AugmentConfig {
    Category category = Category::HazardCategory;
    int threshold_tau = 200;   // class-size cutoff
    int total_samples = 200;   // synthetic records added per minority class
    Technique technique = Technique::SR;
    std::uint64_t seed = 2025;
    double rate = 0.1;         // fraction of tokens touched (SR, CW)
    int n_swaps = 0;           // RW; 0 scales as ceil(0.1 * token count)
    int top_k = 5;             // CW candidate pool

    // Published presets: coarse categories tau=200/S=200, hazard tau=100/S=100,
    // product tau=100/S=50.
    static AugmentConfig preset(Category category, Technique technique, std::uint64_t seed);
};

struct PlanItem {
    std::string source_id;
    int copies = 0;
};

// Per minority class, how many synthetic copies each source record yields.
// Every source but the last gets floor(S / m); the last absorbs the rest.
struct AugmentationPlan {
    struct ClassPlan {
        std::string class_name;
        std::size_t original_support = 0;
        std::vector<PlanItem> items;
    };
    Category category = Category::HazardCategory;
    std::vector<ClassPlan> classes;

    std::size_t total_copies() const;
    nlohmann::json to_json() const;
    static AugmentationPlan from_json(const nlohmann::json& j);
};

// Flat lexical database: word<TAB>synonym1,synonym2,... with lowercase keys.
class SynonymDb {
public:
    static SynonymDb load(const std::string& path);
    static SynonymDb from_entries(std::map<std::string, std::vector<std::string>> entries);

    const std::vector<std::string>* lookup(std::string_view word) const;
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, std::vector<std::string>> entries_;
};

struct ContextQuery {
    std::span<const std::string> left;
    std::span<const std::string> right;
    std::string_view source_id;  // set during apply_plan; empty for ad hoc calls
};

// Ranked insertion candidates for a context window.
class InsertionProvider {
public:
    virtual ~InsertionProvider() = default;
    virtual std::vector<std::string> candidates(const ContextQuery& query, std::size_t k) const = 0;
};

// Deterministic test double: candidates keyed by the token left of the
// insertion point, with an optional fallback list.
class TableInsertionProvider : public InsertionProvider {
public:
    TableInsertionProvider() = default;
    TableInsertionProvider(std::map<std::string, std::vector<std::string>> table,
                           std::vector<std::string> fallback);
    static TableInsertionProvider load(const std::string& path);

    std::vector<std::string> candidates(const ContextQuery& query, std::size_t k) const override;

private:
    std::map<std::string, std::vector<std::string>> table_;
    std::vector<std::string> fallback_;
};

// Static word-embedding neighbors: ranks the vocabulary by cosine against
// the mean vector of the context window. Reads text-format vector files
// (optional word2vec count/dim header line).
class EmbeddingNeighborProvider : public InsertionProvider {
public:
    static EmbeddingNeighborProvider load(const std::string& path);

    std::vector<std::string> candidates(const ContextQuery& query, std::size_t k) const override;
    std::size_t vocabulary_size() const { return words_.size(); }

private:
    std::vector<std::string> words_;
    std::vector<std::vector<float>> vectors_;  // unit norm
    std::map<std::string, std::size_t> index_;
};

// Candidates precomputed out of process, keyed by record id (JSON object
// id -> [words...]).
class FileCandidateProvider : public InsertionProvider {
public:
    static FileCandidateProvider load(const std::string& path);

    std::vector<std::string> candidates(const ContextQuery& query, std::size_t k) const override;

private:
    std::map<std::string, std::vector<std::string>> by_id_;
};

// Technique-specific resources for apply_plan.
struct AugmenterProvider {
    const SynonymDb* synonyms = nullptr;          // SR
    const InsertionProvider* inserter = nullptr;  // CW
};

AugmentationPlan build_plan(const AugmentConfig& config, const LabelSpace& space,
                            const std::vector<IncidentRecord>& train);

// Synthetic records in plan order; labels copied from the source, title and
// text transformed independently under per-field derived sub-seeds.
std::vector<IncidentRecord> apply_plan(const AugmentationPlan& plan, const AugmentConfig& config,
                                       const std::vector<IncidentRecord>& train,
                                       const AugmenterProvider& provider);

std::string synonym_replace(std::string_view text, double rate, const SynonymDb& db,
                            std::uint64_t seed);
std::string random_swap(std::string_view text, int n_swaps, std::uint64_t seed);
std::string contextual_insert(std::string_view text, double rate, const InsertionProvider& provider,
                              int top_k, std::uint64_t seed, std::string_view source_id = {});

// Whitespace token split used by the augmenters (punctuation stays attached).
std::vector<std::string> split_words(std::string_view text);
std::string join_words(std::span<const std::string> words);

// Five-number class-support summary in the shape of the published
// before/after augmentation statistics (linear-interpolation quartiles,
// sample standard deviation).
struct DistributionStats {
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
    double max = 0.0;
    std::size_t total = 0;

    nlohmann::json to_json() const;
};

DistributionStats class_support_stats(const LabelSpace& space);

}  // namespace foodhazard
