#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "foodhazard/augment.hpp"
#include "foodhazard/corpus.hpp"
#include "foodhazard/csv.hpp"
#include "foodhazard/features.hpp"

namespace foodhazard {

// Augmentation block of a manifest: technique parameters plus the resource
// files behind the providers. tau/S fall back to the category presets when
// omitted; the seed falls back to the run seed.
struct AugmentSpec {
    Technique technique = Technique::SR;
    std::optional<int> threshold_tau;
    std::optional<int> total_samples;
    std::optional<std::uint64_t> seed;
    double rate = 0.1;
    int n_swaps = 0;
    int top_k = 5;
    std::string synonym_db_path;
    std::string inserter_kind;  // "table" | "embedding" | "file"
    std::string inserter_path;

    AugmentConfig resolve(Category category, std::uint64_t run_seed) const;
    nlohmann::json to_json() const;
    static AugmentSpec from_json(const nlohmann::json& j);
};

// One experiment: corpus paths, field, category, optional augmentation,
// vectorizer and classifier settings, seeds, output directory. A manifest
// fully determines the run's primary outputs.
struct ExperimentManifest {
    std::string name;
    std::string train_path;
    std::string dev_path;
    std::string test_path;
    Delimiter delimiter = Delimiter::Auto;
    std::string field = "text";  // "title" | "text"
    Category category = Category::HazardCategory;
    std::optional<AugmentSpec> augmentation;
    TfidfConfig features;
    nlohmann::json classifier = nlohmann::json{{"family", "linear-svm"}};
    std::vector<std::uint64_t> seeds = {2025};
    std::string output_dir;

    nlohmann::json to_json() const;
    static ExperimentManifest from_json(const nlohmann::json& j);
    static ExperimentManifest load(const std::string& path);
    void save(const std::string& path) const;

    const std::string& split_path(const std::string& split) const;
    std::string field_of(const IncidentRecord& record) const;
};

}  // namespace foodhazard
