#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "foodhazard/corpus.hpp"
#include "foodhazard/features.hpp"

namespace foodhazard {

enum class Family {
    LinearSvm,
    LogisticRegression,
    DecisionTree,
    RandomForest,
    MultinomialNb,
    Knn
};

enum class KnnWeighting { Uniform, Distance };
enum class ClassWeighting { None, Balanced };
enum class FeatureSubsample { Sqrt, All };

std::string to_string(Family family);
Family family_from_string(std::string_view name);

struct ClassifierConfig {
    Family family = Family::LinearSvm;
    double C = 1.0;                    // svm, lr
    int max_iter = 1000;               // svm, lr epoch/iteration cap
    int n_estimators = 100;            // rf
    int max_depth = 100;               // dt, rf
    bool bootstrap = true;             // rf
    FeatureSubsample feature_subsample = FeatureSubsample::Sqrt;  // rf per-split
    double alpha = 1.0;                // nb smoothing
    int n_neighbors = 5;               // knn
    KnnWeighting weights = KnnWeighting::Uniform;
    ClassWeighting class_weight = ClassWeighting::None;  // svm, lr, dt, rf only
    std::uint64_t seed = 2025;

    nlohmann::json to_json() const;
    // Rejects parameters that do not apply to the requested family.
    static ClassifierConfig from_json(const nlohmann::json& j);
};

class Classifier {
public:
    virtual ~Classifier() = default;

    // One label per row; ties resolve to the lowest label index. Only labels
    // seen in training are emitted.
    virtual std::vector<std::string> predict(const SparseMatrix& X) const = 0;
    virtual nlohmann::json to_json() const = 0;

    Family family() const { return family_; }
    const std::vector<std::string>& labels() const { return labels_; }

    void save(const std::string& path) const;
    static std::unique_ptr<Classifier> from_json(const nlohmann::json& j);
    static std::unique_ptr<Classifier> load(const std::string& path);

protected:
    Classifier(Family family, std::vector<std::string> labels)
        : family_(family), labels_(std::move(labels)) {}

    Family family_;
    std::vector<std::string> labels_;  // lexicographic
};

// w(c) = n_samples / (n_classes * count(c)).
std::map<std::string, double> class_weights_balanced(const LabelSpace& space);

std::unique_ptr<Classifier> train_classifier(const ClassifierConfig& config, const SparseMatrix& X,
                                             const std::vector<std::string>& y);

namespace detail {

struct LabeledData {
    std::vector<std::string> labels;   // sorted unique
    std::vector<std::uint32_t> y;      // index into labels per row
    std::vector<double> sample_weight; // all 1.0 unless balanced
};

LabeledData index_labels(const ClassifierConfig& config, const SparseMatrix& X,
                         const std::vector<std::string>& y);

std::unique_ptr<Classifier> train_linear_svm(const ClassifierConfig&, const SparseMatrix&,
                                             const LabeledData&);
std::unique_ptr<Classifier> train_logistic_regression(const ClassifierConfig&, const SparseMatrix&,
                                                      const LabeledData&);
std::unique_ptr<Classifier> train_multinomial_nb(const ClassifierConfig&, const SparseMatrix&,
                                                 const LabeledData&);
std::unique_ptr<Classifier> train_knn(const ClassifierConfig&, const SparseMatrix&,
                                      const LabeledData&);
std::unique_ptr<Classifier> train_decision_tree(const ClassifierConfig&, const SparseMatrix&,
                                                const LabeledData&);
std::unique_ptr<Classifier> train_random_forest(const ClassifierConfig&, const SparseMatrix&,
                                                const LabeledData&);

std::unique_ptr<Classifier> linear_from_json(const nlohmann::json&);
std::unique_ptr<Classifier> nb_from_json(const nlohmann::json&);
std::unique_ptr<Classifier> knn_from_json(const nlohmann::json&);
std::unique_ptr<Classifier> tree_from_json(const nlohmann::json&);
std::unique_ptr<Classifier> forest_from_json(const nlohmann::json&);

}  // namespace detail

// Class membership probabilities, rows summing to 1 (NB only).
std::vector<std::vector<double>> nb_posteriors(const Classifier& model, const SparseMatrix& X);

}  // namespace foodhazard
