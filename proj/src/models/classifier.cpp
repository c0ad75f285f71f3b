#include "foodhazard/models.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "foodhazard/error.hpp"

namespace foodhazard {

std::string to_string(Family family) {
    switch (family) {
        case Family::LinearSvm: return "linear-svm";
        case Family::LogisticRegression: return "logistic-regression";
        case Family::DecisionTree: return "decision-tree";
        case Family::RandomForest: return "random-forest";
        case Family::MultinomialNb: return "multinomial-nb";
        case Family::Knn: return "knn";
    }
    return "linear-svm";
}

Family family_from_string(std::string_view name) {
    for (Family f : {Family::LinearSvm, Family::LogisticRegression, Family::DecisionTree,
                     Family::RandomForest, Family::MultinomialNb, Family::Knn}) {
        if (to_string(f) == name) return f;
    }
    throw ConfigError("unknown classifier family: " + std::string(name));
}

namespace {

const std::set<std::string>& allowed_keys(Family family) {
    static const std::set<std::string> common = {"family", "seed"};
    static const std::map<Family, std::set<std::string>> per_family = {
        {Family::LinearSvm, {"C", "max_iter", "class_weight"}},
        {Family::LogisticRegression, {"C", "max_iter", "class_weight"}},
        {Family::DecisionTree, {"max_depth", "class_weight"}},
        {Family::RandomForest,
         {"n_estimators", "max_depth", "class_weight", "bootstrap", "feature_subsample"}},
        {Family::MultinomialNb, {"alpha"}},
        {Family::Knn, {"n_neighbors", "weights"}},
    };
    static std::map<Family, std::set<std::string>> merged = [] {
        std::map<Family, std::set<std::string>> out;
        for (const auto& [fam, keys] : per_family) {
            std::set<std::string> all = common;
            all.insert(keys.begin(), keys.end());
            out[fam] = std::move(all);
        }
        return out;
    }();
    return merged.at(family);
}

}  // namespace

nlohmann::json ClassifierConfig::to_json() const {
    nlohmann::json j{{"family", to_string(family)}, {"seed", seed}};
    switch (family) {
        case Family::LinearSvm:
        case Family::LogisticRegression:
            j["C"] = C;
            j["max_iter"] = max_iter;
            j["class_weight"] = class_weight == ClassWeighting::Balanced ? "balanced" : "none";
            break;
        case Family::DecisionTree:
            j["max_depth"] = max_depth;
            j["class_weight"] = class_weight == ClassWeighting::Balanced ? "balanced" : "none";
            break;
        case Family::RandomForest:
            j["n_estimators"] = n_estimators;
            j["max_depth"] = max_depth;
            j["class_weight"] = class_weight == ClassWeighting::Balanced ? "balanced" : "none";
            j["bootstrap"] = bootstrap;
            j["feature_subsample"] = feature_subsample == FeatureSubsample::Sqrt ? "sqrt" : "all";
            break;
        case Family::MultinomialNb:
            j["alpha"] = alpha;
            break;
        case Family::Knn:
            j["n_neighbors"] = n_neighbors;
            j["weights"] = weights == KnnWeighting::Distance ? "distance" : "uniform";
            break;
    }
    return j;
}

ClassifierConfig ClassifierConfig::from_json(const nlohmann::json& j) {
    ClassifierConfig c;
    c.family = family_from_string(j.at("family").get<std::string>());
    const auto& allowed = allowed_keys(c.family);
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            throw ConfigError("parameter \"" + key + "\" is not valid for family " +
                              to_string(c.family));
        }
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("C")) c.C = j.at("C").get<double>();
    if (j.contains("max_iter")) c.max_iter = j.at("max_iter").get<int>();
    if (j.contains("n_estimators")) c.n_estimators = j.at("n_estimators").get<int>();
    if (j.contains("max_depth")) c.max_depth = j.at("max_depth").get<int>();
    if (j.contains("bootstrap")) c.bootstrap = j.at("bootstrap").get<bool>();
    if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
    if (j.contains("n_neighbors")) c.n_neighbors = j.at("n_neighbors").get<int>();
    if (j.contains("feature_subsample")) {
        const auto mode = j.at("feature_subsample").get<std::string>();
        if (mode == "sqrt") {
            c.feature_subsample = FeatureSubsample::Sqrt;
        } else if (mode == "all") {
            c.feature_subsample = FeatureSubsample::All;
        } else {
            throw ConfigError("unknown feature_subsample mode: " + mode);
        }
    }
    if (j.contains("weights")) {
        const auto mode = j.at("weights").get<std::string>();
        if (mode == "uniform") {
            c.weights = KnnWeighting::Uniform;
        } else if (mode == "distance") {
            c.weights = KnnWeighting::Distance;
        } else {
            throw ConfigError("unknown knn weighting: " + mode);
        }
    }
    if (j.contains("class_weight")) {
        const auto mode = j.at("class_weight").get<std::string>();
        if (mode == "balanced") {
            c.class_weight = ClassWeighting::Balanced;
        } else if (mode == "none") {
            c.class_weight = ClassWeighting::None;
        } else {
            throw ConfigError("unknown class_weight mode: " + mode);
        }
    }
    if (c.C <= 0.0 || c.max_iter < 1 || c.n_estimators < 1 || c.max_depth < 1 ||
        c.alpha <= 0.0 || c.n_neighbors < 1) {
        throw ConfigError("classifier parameter out of range");
    }
    return c;
}

std::map<std::string, double> class_weights_balanced(const LabelSpace& space) {
    const double n_samples = static_cast<double>(space.total());
    const double n_classes = static_cast<double>(space.counts.size());
    std::map<std::string, double> weights;
    for (const auto& [cls, count] : space.counts) {
        if (count == 0) throw ConfigError("balanced weights need every class count >= 1");
        weights[cls] = n_samples / (n_classes * static_cast<double>(count));
    }
    return weights;
}

namespace detail {

LabeledData index_labels(const ClassifierConfig& config, const SparseMatrix& X,
                         const std::vector<std::string>& y) {
    if (X.rows != y.size()) {
        throw DimensionError("feature matrix has " + std::to_string(X.rows) + " rows but " +
                             std::to_string(y.size()) + " labels");
    }
    if (y.empty()) throw DimensionError("cannot train on zero samples");

    LabeledData data;
    std::map<std::string, std::size_t> counts;
    for (const auto& label : y) counts[label]++;
    for (const auto& [label, count] : counts) data.labels.push_back(label);

    std::map<std::string, std::uint32_t> index;
    for (std::size_t i = 0; i < data.labels.size(); ++i) {
        index[data.labels[i]] = static_cast<std::uint32_t>(i);
    }
    data.y.reserve(y.size());
    for (const auto& label : y) data.y.push_back(index.at(label));

    data.sample_weight.assign(y.size(), 1.0);
    if (config.class_weight == ClassWeighting::Balanced) {
        const double n = static_cast<double>(y.size());
        const double k = static_cast<double>(data.labels.size());
        std::vector<double> per_class(data.labels.size());
        for (std::size_t i = 0; i < data.labels.size(); ++i) {
            per_class[i] = n / (k * static_cast<double>(counts.at(data.labels[i])));
        }
        for (std::size_t i = 0; i < y.size(); ++i) data.sample_weight[i] = per_class[data.y[i]];
    }
    return data;
}

}  // namespace detail

std::unique_ptr<Classifier> train_classifier(const ClassifierConfig& config, const SparseMatrix& X,
                                             const std::vector<std::string>& y) {
    detail::LabeledData data = detail::index_labels(config, X, y);
    const bool discriminative =
        config.family == Family::LinearSvm || config.family == Family::LogisticRegression;
    if (discriminative && data.labels.size() < 2) {
        throw ConfigError("family " + to_string(config.family) +
                          " needs at least two distinct labels; got one");
    }
    switch (config.family) {
        case Family::LinearSvm: return detail::train_linear_svm(config, X, data);
        case Family::LogisticRegression: return detail::train_logistic_regression(config, X, data);
        case Family::MultinomialNb: return detail::train_multinomial_nb(config, X, data);
        case Family::Knn: return detail::train_knn(config, X, data);
        case Family::DecisionTree: return detail::train_decision_tree(config, X, data);
        case Family::RandomForest: return detail::train_random_forest(config, X, data);
    }
    throw ConfigError("unhandled classifier family");
}

void Classifier::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write model file: " + path);
    out << to_json().dump(2) << '\n';
}

std::unique_ptr<Classifier> Classifier::from_json(const nlohmann::json& j) {
    if (j.at("format_version").get<int>() != 1) {
        throw ConfigError("unsupported model format version");
    }
    switch (family_from_string(j.at("family").get<std::string>())) {
        case Family::LinearSvm:
        case Family::LogisticRegression: return detail::linear_from_json(j);
        case Family::MultinomialNb: return detail::nb_from_json(j);
        case Family::Knn: return detail::knn_from_json(j);
        case Family::DecisionTree: return detail::tree_from_json(j);
        case Family::RandomForest: return detail::forest_from_json(j);
    }
    throw ConfigError("unhandled classifier family in model file");
}

std::unique_ptr<Classifier> Classifier::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read model file: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

}  // namespace foodhazard
