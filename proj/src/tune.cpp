#include "foodhazard/tune.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "foodhazard/error.hpp"

namespace foodhazard {

bool SearchSpace::contains(const nlohmann::json& config) const {
    for (const auto& dim : dims) {
        if (!config.contains(dim.name)) return false;
        const auto& value = config.at(dim.name);
        if (std::find(dim.values.begin(), dim.values.end(), value) == dim.values.end()) {
            return false;
        }
    }
    return true;
}

nlohmann::json SearchSpace::to_json() const {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& dim : dims) out[dim.name] = dim.values;
    return out;
}

SearchSpace SearchSpace::from_json(const nlohmann::json& j) {
    SearchSpace space;
    for (const auto& [name, values] : j.items()) {
        if (!values.is_array() || values.empty()) {
            throw ConfigError("search dimension \"" + name + "\" needs a non-empty value list");
        }
        space.dims.push_back({name, std::vector<nlohmann::json>(values.begin(), values.end())});
    }
    return space;
}

namespace {

std::vector<SearchDimension> vectorizer_dims() {
    return {
        {"analyzer", {"word", "char"}},
        {"tokenizer", {"default", "stopword-filtering"}},
        {"ngram_range",
         {nlohmann::json{1, 1}, nlohmann::json{1, 2}, nlohmann::json{1, 3}, nlohmann::json{1, 4},
          nlohmann::json{1, 5}, nlohmann::json{2, 3}, nlohmann::json{2, 4}, nlohmann::json{2, 5},
          nlohmann::json{3, 5}}},
        {"min_df", {1, 2, 5}},
        {"max_df", {0.1, 0.3, 0.5}},
        {"max_features", {1000, 5000, 10000, 50000}},
    };
}

}  // namespace

SearchSpace SearchSpace::for_family(Family family) {
    SearchSpace space;
    space.dims = vectorizer_dims();
    switch (family) {
        case Family::LinearSvm:
        case Family::LogisticRegression:
            space.dims.push_back({"C", {0.1, 1, 5, 10}});
            space.dims.push_back({"max_iter", {100, 1000, 5000}});
            break;
        case Family::DecisionTree:
            space.dims.push_back({"max_depth", {100, 200, 300}});
            break;
        case Family::RandomForest:
            space.dims.push_back({"n_estimators", {100, 200, 300}});
            space.dims.push_back({"max_depth", {100, 1000, 5000}});
            break;
        case Family::MultinomialNb:
            space.dims.push_back({"alpha", {0.01, 0.1, 1, 5}});
            break;
        case Family::Knn:
            space.dims.push_back({"n_neighbors", {3, 5, 7, 9, 11}});
            space.dims.push_back({"weights", {"uniform", "distance"}});
            break;
    }
    return space;
}

SearchSpace SearchSpace::external_model() {
    SearchSpace space;
    space.dims = {
        {"batch_size", {8, 16, 32}},
        {"epochs", {3, 5, 10}},
        {"lr_scheduler", {"lin", "cos", "cosRestarts"}},
    };
    return space;
}

nlohmann::json RandomSampler::sample(const SearchSpace& space,
                                     const std::vector<TrialRecord>& /*history*/, Rng& rng) {
    nlohmann::json config = nlohmann::json::object();
    for (const auto& dim : space.dims) {
        config[dim.name] = dim.values[rng.index(dim.values.size())];
    }
    return config;
}

nlohmann::json AdaptiveSampler::sample(const SearchSpace& space,
                                       const std::vector<TrialRecord>& history, Rng& rng) {
    std::vector<const TrialRecord*> completed;
    for (const auto& t : history) {
        if (!t.failed) completed.push_back(&t);
    }
    std::vector<const TrialRecord*> top;
    if (!completed.empty()) {
        const auto n_top = static_cast<std::size_t>(std::max<double>(
            1.0, std::ceil(top_fraction_ * static_cast<double>(completed.size()))));
        std::stable_sort(completed.begin(), completed.end(),
                         [](const TrialRecord* a, const TrialRecord* b) {
                             return a->objective > b->objective;
                         });
        completed.resize(std::min(n_top, completed.size()));
        top = std::move(completed);
    }

    nlohmann::json config = nlohmann::json::object();
    for (const auto& dim : space.dims) {
        std::vector<double> mass(dim.values.size(), 1.0);  // Laplace prior
        for (const TrialRecord* t : top) {
            if (!t->config.contains(dim.name)) continue;
            const auto& v = t->config.at(dim.name);
            for (std::size_t i = 0; i < dim.values.size(); ++i) {
                if (dim.values[i] == v) {
                    mass[i] += 1.0;
                    break;
                }
            }
        }
        double total = 0.0;
        for (double m : mass) total += m;
        double draw = rng.unit() * total;
        std::size_t chosen = dim.values.size() - 1;
        for (std::size_t i = 0; i < mass.size(); ++i) {
            draw -= mass[i];
            if (draw < 0.0) {
                chosen = i;
                break;
            }
        }
        config[dim.name] = dim.values[chosen];
    }
    return config;
}

std::unique_ptr<Sampler> make_sampler(const std::string& name) {
    if (name == "random") return std::make_unique<RandomSampler>();
    if (name == "adaptive") return std::make_unique<AdaptiveSampler>();
    throw ConfigError("unknown sampler: " + name);
}

nlohmann::json SearchResult::to_json() const {
    nlohmann::json trial_array = nlohmann::json::array();
    for (const auto& t : trials) {
        trial_array.push_back({{"index", t.index},
                               {"config", t.config},
                               {"objective", t.failed ? nlohmann::json() : nlohmann::json(t.objective)},
                               {"wall_ms", t.wall_ms},
                               {"failed", t.failed}});
    }
    return nlohmann::json{
        {"best_index", best_index}, {"best_config", best_config}, {"trials", trial_array}};
}

SearchResult run_search(const SearchSpace& space, int n_trials, Sampler& sampler,
                        std::uint64_t seed,
                        const std::function<double(const nlohmann::json&)>& objective) {
    if (n_trials < 1) throw ConfigError("search needs at least one trial");
    if (space.dims.empty()) throw ConfigError("search space is empty");

    SearchResult result;
    Rng rng(seed);
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_trials; ++i) {
        TrialRecord trial;
        trial.index = i;
        trial.config = sampler.sample(space, result.trials, rng);
        const auto started = std::chrono::steady_clock::now();
        try {
            trial.objective = objective(trial.config);
        } catch (const std::exception&) {
            trial.failed = true;
            trial.objective = -std::numeric_limits<double>::infinity();
        }
        trial.wall_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - started)
                            .count();
        if (!trial.failed && trial.objective > best) {
            best = trial.objective;
            result.best_index = i;
            result.best_config = trial.config;
        }
        result.trials.push_back(std::move(trial));
    }
    return result;
}

}  // namespace foodhazard
