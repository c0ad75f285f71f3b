#include "foodhazard/manifest.hpp"

#include <fstream>

#include "foodhazard/error.hpp"

namespace foodhazard {

namespace {

Delimiter delimiter_from(const std::string& name) {
    if (name == "auto") return Delimiter::Auto;
    if (name == "comma") return Delimiter::Comma;
    if (name == "tab") return Delimiter::Tab;
    throw ConfigError("unknown delimiter: " + name);
}

std::string delimiter_name(Delimiter d) {
    switch (d) {
        case Delimiter::Auto: return "auto";
        case Delimiter::Comma: return "comma";
        case Delimiter::Tab: return "tab";
    }
    return "auto";
}

}  // namespace

AugmentConfig AugmentSpec::resolve(Category category, std::uint64_t run_seed) const {
    AugmentConfig config = AugmentConfig::preset(category, technique, seed.value_or(run_seed));
    if (threshold_tau) config.threshold_tau = *threshold_tau;
    if (total_samples) config.total_samples = *total_samples;
    config.rate = rate;
    config.n_swaps = n_swaps;
    config.top_k = top_k;
    return config;
}

nlohmann::json AugmentSpec::to_json() const {
    nlohmann::json j{{"technique", to_string(technique)},
                     {"rate", rate},
                     {"n_swaps", n_swaps},
                     {"top_k", top_k}};
    if (threshold_tau) j["threshold_tau"] = *threshold_tau;
    if (total_samples) j["total_samples"] = *total_samples;
    if (seed) j["seed"] = *seed;
    if (!synonym_db_path.empty()) j["synonym_db"] = synonym_db_path;
    if (!inserter_kind.empty()) {
        j["insertion"] = {{"kind", inserter_kind}, {"path", inserter_path}};
    }
    return j;
}

AugmentSpec AugmentSpec::from_json(const nlohmann::json& j) {
    AugmentSpec spec;
    spec.technique = technique_from_string(j.at("technique").get<std::string>());
    if (j.contains("threshold_tau")) spec.threshold_tau = j.at("threshold_tau").get<int>();
    if (j.contains("total_samples")) spec.total_samples = j.at("total_samples").get<int>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("rate")) spec.rate = j.at("rate").get<double>();
    if (j.contains("n_swaps")) spec.n_swaps = j.at("n_swaps").get<int>();
    if (j.contains("top_k")) spec.top_k = j.at("top_k").get<int>();
    if (j.contains("synonym_db")) spec.synonym_db_path = j.at("synonym_db").get<std::string>();
    if (j.contains("insertion")) {
        spec.inserter_kind = j.at("insertion").at("kind").get<std::string>();
        spec.inserter_path = j.at("insertion").at("path").get<std::string>();
    }
    if (spec.technique == Technique::SR && spec.synonym_db_path.empty()) {
        throw ConfigError("SR augmentation needs a synonym_db path");
    }
    if (spec.technique == Technique::CW && spec.inserter_kind.empty()) {
        throw ConfigError("CW augmentation needs an insertion provider");
    }
    return spec;
}

nlohmann::json ExperimentManifest::to_json() const {
    nlohmann::json j{{"name", name},
                     {"corpus",
                      {{"train", train_path},
                       {"dev", dev_path},
                       {"test", test_path},
                       {"delimiter", delimiter_name(delimiter)}}},
                     {"field", field},
                     {"category", to_string(category)},
                     {"features", features.to_json()},
                     {"classifier", classifier},
                     {"seeds", seeds},
                     {"output_dir", output_dir}};
    j["augmentation"] = augmentation ? augmentation->to_json() : nlohmann::json();
    return j;
}

ExperimentManifest ExperimentManifest::from_json(const nlohmann::json& j) {
    ExperimentManifest m;
    if (j.contains("name")) m.name = j.at("name").get<std::string>();
    const auto& corpus = j.at("corpus");
    if (corpus.contains("train")) m.train_path = corpus.at("train").get<std::string>();
    if (corpus.contains("dev")) m.dev_path = corpus.at("dev").get<std::string>();
    if (corpus.contains("test")) m.test_path = corpus.at("test").get<std::string>();
    if (corpus.contains("delimiter")) {
        m.delimiter = delimiter_from(corpus.at("delimiter").get<std::string>());
    }
    if (j.contains("field")) m.field = j.at("field").get<std::string>();
    if (m.field != "title" && m.field != "text") {
        throw ConfigError("manifest field must be \"title\" or \"text\"");
    }
    m.category = category_from_string(j.at("category").get<std::string>());
    if (j.contains("augmentation") && !j.at("augmentation").is_null()) {
        m.augmentation = AugmentSpec::from_json(j.at("augmentation"));
    }
    if (j.contains("features")) m.features = TfidfConfig::from_json(j.at("features"));
    if (j.contains("classifier")) m.classifier = j.at("classifier");
    if (j.contains("seeds")) m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("seed")) m.seeds = {j.at("seed").get<std::uint64_t>()};
    if (m.seeds.empty()) throw ConfigError("manifest needs at least one seed");
    if (j.contains("output_dir")) m.output_dir = j.at("output_dir").get<std::string>();
    return m;
}

ExperimentManifest ExperimentManifest::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open manifest: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

void ExperimentManifest::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write manifest: " + path);
    out << to_json().dump(2) << '\n';
}

const std::string& ExperimentManifest::split_path(const std::string& split) const {
    if (split == "train") return train_path;
    if (split == "dev") return dev_path;
    if (split == "test") return test_path;
    throw ConfigError("unknown split: " + split);
}

std::string ExperimentManifest::field_of(const IncidentRecord& record) const {
    return field == "title" ? record.title : record.text;
}

}  // namespace foodhazard
