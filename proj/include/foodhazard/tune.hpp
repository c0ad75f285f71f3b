#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "foodhazard/models.hpp"
#include "foodhazard/rng.hpp"

namespace foodhazard {

// Finite discrete grid: one value list per named dimension.
struct SearchDimension {
    std::string name;
    std::vector<nlohmann::json> values;
};

struct SearchSpace {
    std::vector<SearchDimension> dims;

    bool contains(const nlohmann::json& config) const;
    nlohmann::json to_json() const;
    static SearchSpace from_json(const nlohmann::json& j);

    // Published grid for one classifier family plus the vectorizer dimensions.
    static SearchSpace for_family(Family family);
    // Published grid for transformer runs (batch size, epochs, lr scheduler);
    // kept for config generation only.
    static SearchSpace external_model();
};

struct TrialRecord {
    int index = 0;
    nlohmann::json config;
    double objective = 0.0;
    double wall_ms = 0.0;
    bool failed = false;
};

class Sampler {
public:
    virtual ~Sampler() = default;
    virtual nlohmann::json sample(const SearchSpace& space, const std::vector<TrialRecord>& history,
                                  Rng& rng) = 0;
    virtual std::string name() const = 0;
};

// Independent uniform draw per dimension.
class RandomSampler : public Sampler {
public:
    nlohmann::json sample(const SearchSpace& space, const std::vector<TrialRecord>& history,
                          Rng& rng) override;
    std::string name() const override { return "random"; }
};

// Categorical-frequency sampler: values over-represented in the top fraction
// of completed trials get proportionally more mass (Laplace prior 1).
class AdaptiveSampler : public Sampler {
public:
    explicit AdaptiveSampler(double top_fraction = 0.25) : top_fraction_(top_fraction) {}

    nlohmann::json sample(const SearchSpace& space, const std::vector<TrialRecord>& history,
                          Rng& rng) override;
    std::string name() const override { return "adaptive"; }

private:
    double top_fraction_;
};

std::unique_ptr<Sampler> make_sampler(const std::string& name);

struct SearchResult {
    nlohmann::json best_config;
    int best_index = -1;
    std::vector<TrialRecord> trials;

    nlohmann::json to_json() const;
};

// Sequential trials; a throwing objective marks the trial failed with score
// -inf and the search continues. Ties keep the earliest trial.
SearchResult run_search(const SearchSpace& space, int n_trials, Sampler& sampler,
                        std::uint64_t seed,
                        const std::function<double(const nlohmann::json&)>& objective);

}  // namespace foodhazard
