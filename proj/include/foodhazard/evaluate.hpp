#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace foodhazard {

struct ClassMetrics {
    std::string label;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;  // gold occurrences
};

// Unweighted mean of per-class F1 over the union of gold and predicted
// labels; classes with zero precision+recall contribute 0.
double f1_macro(std::span<const std::string> gold, std::span<const std::string> pred);

// Per-class precision/recall/F1 over the union label set, sorted by label.
std::vector<ClassMetrics> per_class_metrics(std::span<const std::string> gold,
                                            std::span<const std::string> pred);

struct ScoreReport {
    double f1_hazard = 0.0;
    double f1_product_on_correct_hazard = 0.0;
    double combined = 0.0;
    std::size_t n_samples = 0;
    std::size_t n_correct_hazard = 0;
    std::vector<ClassMetrics> per_class_hazard;
    std::vector<ClassMetrics> per_class_product;

    nlohmann::json to_json() const;
};

// Hierarchical two-part score: hazard macro-F1 on all samples, product
// macro-F1 on the samples whose hazard was predicted correctly, averaged.
// An empty correct-hazard mask zeroes the product term.
ScoreReport task_score(std::span<const std::string> hazard_true,
                       std::span<const std::string> product_true,
                       std::span<const std::string> hazard_pred,
                       std::span<const std::string> product_pred);

struct GroupedConfusion {
    std::size_t minority_correct = 0;
    std::size_t minority_total = 0;
    std::size_t majority_correct = 0;
    std::size_t majority_total = 0;
    std::vector<std::string> minority_classes;

    nlohmann::json to_json() const;
};

// Collapses the confusion matrix into minority vs majority groups keyed by
// the TRUE class.
GroupedConfusion grouped_confusion(std::span<const std::string> gold,
                                   std::span<const std::string> pred,
                                   const std::set<std::string>& minority_classes);

struct KruskalResult {
    double h = 0.0;
    double p = 1.0;
};

// Two-group Kruskal-Wallis: midrank tie handling, standard tie correction,
// p from the chi-square survival function with 1 degree of freedom. If all
// values across both groups are identical, H = 0 and p = 1.
KruskalResult kruskal_wallis_2group(std::span<const double> a, std::span<const double> b);

// Upper tail of the chi-square distribution (regularized incomplete gamma).
double chi2_survival(double x, int dof);

}  // namespace foodhazard
