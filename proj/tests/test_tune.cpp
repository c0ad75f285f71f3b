#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "foodhazard/error.hpp"
#include "foodhazard/tune.hpp"

using namespace foodhazard;

namespace {

SearchSpace toy_space() {
    SearchSpace space;
    space.dims = {
        {"C", {0.1, 1, 5, 10}},
        {"kind", {"a", "b"}},
    };
    return space;
}

}  // namespace

TEST_CASE("a single trial returns its own config") {
    RandomSampler sampler;
    const SearchResult result =
        run_search(toy_space(), 1, sampler, 7, [](const nlohmann::json&) { return 0.5; });
    CHECK(result.best_index == 0);
    CHECK(result.trials.size() == 1);
    CHECK(result.best_config == result.trials[0].config);
}

TEST_CASE("constant objectives keep the earliest trial") {
    RandomSampler sampler;
    const SearchResult result =
        run_search(toy_space(), 12, sampler, 7, [](const nlohmann::json&) { return 1.0; });
    CHECK(result.best_index == 0);
}

TEST_CASE("an indicator objective is found by enumeration") {
    SearchSpace space;
    space.dims = {{"x", {1, 2, 3, 4}}};  // 4-point space
    RandomSampler sampler;
    const auto objective = [](const nlohmann::json& config) {
        return config.at("x").get<int>() == 3 ? 1.0 : 0.0;
    };
    const SearchResult result = run_search(space, 64, sampler, 11, objective);
    CHECK(result.best_config.at("x").get<int>() == 3);
    CHECK(result.trials[result.best_index].objective == 1.0);
}

TEST_CASE("failed trials score minus infinity and the search continues") {
    RandomSampler sampler;
    int calls = 0;
    const SearchResult result = run_search(toy_space(), 6, sampler, 3, [&](const nlohmann::json&) {
        ++calls;
        if (calls % 2 == 1) throw ConfigError("boom");
        return static_cast<double>(calls);
    });
    CHECK(result.trials.size() == 6);
    int failures = 0;
    for (const auto& t : result.trials) {
        if (t.failed) {
            CHECK(std::isinf(t.objective));
            ++failures;
        }
    }
    CHECK(failures == 3);
    CHECK(result.best_index >= 0);
    CHECK_FALSE(result.trials[result.best_index].failed);
}

TEST_CASE("sampled configs never leave the declared space") {
    for (const char* name : {"random", "adaptive"}) {
        auto sampler = make_sampler(name);
        const SearchSpace space = toy_space();
        const SearchResult result =
            run_search(space, 40, *sampler, 13, [](const nlohmann::json& c) {
                return c.at("C").get<double>();
            });
        for (const auto& t : result.trials) CHECK(space.contains(t.config));
    }
}

TEST_CASE("one-value dimensions always produce that config") {
    SearchSpace space;
    space.dims = {{"only", {42}}};
    RandomSampler sampler;
    Rng rng(1);
    for (int i = 0; i < 10; ++i) CHECK(sampler.sample(space, {}, rng).at("only").get<int>() == 42);
}

TEST_CASE("the seeded sampler replays its sequence") {
    RandomSampler sampler;
    const SearchSpace space = toy_space();
    auto draw_sequence = [&](std::uint64_t seed) {
        Rng rng(seed);
        std::vector<nlohmann::json> out;
        for (int i = 0; i < 20; ++i) out.push_back(sampler.sample(space, {}, rng));
        return out;
    };
    CHECK(draw_sequence(99) == draw_sequence(99));
    CHECK(draw_sequence(99) != draw_sequence(100));
}

TEST_CASE("best objective is monotone in the trial budget for a fixed seed") {
    RandomSampler sampler;
    const auto objective = [](const nlohmann::json& c) {
        return c.at("C").get<double>() + (c.at("kind").get<std::string>() == "b" ? 0.5 : 0.0);
    };
    double previous = -1.0;
    for (int n = 1; n <= 16; ++n) {
        const SearchResult result = run_search(toy_space(), n, sampler, 5, objective);
        const double best = result.trials[result.best_index].objective;
        CHECK(best >= previous);
        previous = best;
    }
}

TEST_CASE("logged configs replay to their logged objective") {
    RandomSampler sampler;
    const auto objective = [](const nlohmann::json& c) {
        return c.at("C").get<double>() * 3.0 + static_cast<double>(c.at("kind").get<std::string>().size());
    };
    const SearchResult result = run_search(toy_space(), 15, sampler, 17, objective);
    for (const auto& t : result.trials) {
        CHECK(objective(t.config) == t.objective);
    }
}

TEST_CASE("the adaptive sampler biases toward dominant top-quartile values") {
    SearchSpace space;
    space.dims = {{"C", {0.1, 1, 5, 10}}};

    std::vector<TrialRecord> history;
    for (int i = 0; i < 10; ++i) {
        TrialRecord t;
        t.index = i;
        // C = 10 wins every top slot
        t.config = nlohmann::json{{"C", i < 3 ? 10 : 1}};
        t.objective = i < 3 ? 1.0 : 0.1;
        history.push_back(t);
    }

    AdaptiveSampler sampler(0.25);
    Rng rng(21);
    std::map<double, int> freq;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        freq[sampler.sample(space, history, rng).at("C").get<double>()]++;
    }
    // frequency-count oracle: P(C=10) must clear the uniform 1/4
    CHECK(static_cast<double>(freq[10]) / draws > 0.25 + 0.05);
    CHECK(freq[0.1] > 0);  // prior keeps unseen values reachable
}

TEST_CASE("published family spaces carry the expected dimensions") {
    const SearchSpace svm = SearchSpace::for_family(Family::LinearSvm);
    bool has_c = false;
    bool has_ngram = false;
    for (const auto& dim : svm.dims) {
        if (dim.name == "C") {
            has_c = true;
            CHECK(dim.values.size() == 4);
        }
        if (dim.name == "ngram_range") {
            has_ngram = true;
            CHECK(dim.values.size() == 9);
        }
    }
    CHECK(has_c);
    CHECK(has_ngram);

    const SearchSpace knn = SearchSpace::for_family(Family::Knn);
    bool has_neighbors = false;
    for (const auto& dim : knn.dims) {
        if (dim.name == "n_neighbors") {
            has_neighbors = true;
            CHECK(dim.values.size() == 5);
        }
        CHECK(dim.name != "C");
    }
    CHECK(has_neighbors);

    const SearchSpace external = SearchSpace::external_model();
    CHECK(external.dims.size() == 3);
}

TEST_CASE("search spaces round trip through JSON") {
    const SearchSpace space = SearchSpace::for_family(Family::RandomForest);
    const SearchSpace back = SearchSpace::from_json(space.to_json());
    CHECK(back.to_json() == space.to_json());
    CHECK_THROWS_AS(SearchSpace::from_json(nlohmann::json{{"empty", nlohmann::json::array()}}),
                    ConfigError);
}
