#include "foodhazard/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>

#include "foodhazard/error.hpp"

namespace foodhazard {

namespace {

struct ClassCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t support = 0;
};

std::map<std::string, ClassCounts> confusion(std::span<const std::string> gold,
                                             std::span<const std::string> pred) {
    if (gold.size() != pred.size()) {
        throw DimensionError("gold/prediction length mismatch: " + std::to_string(gold.size()) +
                             " vs " + std::to_string(pred.size()));
    }
    std::map<std::string, ClassCounts> counts;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        counts[gold[i]].support++;
        if (gold[i] == pred[i]) {
            counts[gold[i]].tp++;
        } else {
            counts[gold[i]].fn++;
            counts[pred[i]].fp++;
        }
    }
    return counts;
}

}  // namespace

std::vector<ClassMetrics> per_class_metrics(std::span<const std::string> gold,
                                            std::span<const std::string> pred) {
    std::vector<ClassMetrics> out;
    for (const auto& [label, c] : confusion(gold, pred)) {
        ClassMetrics m;
        m.label = label;
        m.support = c.support;
        const double tp = static_cast<double>(c.tp);
        m.precision = c.tp + c.fp > 0 ? tp / static_cast<double>(c.tp + c.fp) : 0.0;
        m.recall = c.tp + c.fn > 0 ? tp / static_cast<double>(c.tp + c.fn) : 0.0;
        m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                            : 0.0;
        out.push_back(std::move(m));
    }
    return out;
}

double f1_macro(std::span<const std::string> gold, std::span<const std::string> pred) {
    if (gold.empty()) throw DimensionError("cannot score zero samples");
    const auto metrics = per_class_metrics(gold, pred);
    double sum = 0.0;
    for (const auto& m : metrics) sum += m.f1;
    return sum / static_cast<double>(metrics.size());
}

nlohmann::json ScoreReport::to_json() const {
    auto table = [](const std::vector<ClassMetrics>& metrics) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& m : metrics) {
            rows.push_back({{"label", m.label},
                            {"precision", m.precision},
                            {"recall", m.recall},
                            {"f1", m.f1},
                            {"support", m.support}});
        }
        return rows;
    };
    return nlohmann::json{{"f1_hazard", f1_hazard},
                          {"f1_product_on_correct_hazard", f1_product_on_correct_hazard},
                          {"combined", combined},
                          {"n_samples", n_samples},
                          {"n_correct_hazard", n_correct_hazard},
                          {"per_class_hazard", table(per_class_hazard)},
                          {"per_class_product", table(per_class_product)}};
}

ScoreReport task_score(std::span<const std::string> hazard_true,
                       std::span<const std::string> product_true,
                       std::span<const std::string> hazard_pred,
                       std::span<const std::string> product_pred) {
    if (hazard_true.size() != product_true.size() || hazard_true.size() != hazard_pred.size() ||
        hazard_true.size() != product_pred.size()) {
        throw DimensionError("task_score requires four aligned vectors");
    }
    ScoreReport report;
    report.n_samples = hazard_true.size();
    report.f1_hazard = f1_macro(hazard_true, hazard_pred);
    report.per_class_hazard = per_class_metrics(hazard_true, hazard_pred);

    std::vector<std::string> pt_masked;
    std::vector<std::string> pp_masked;
    for (std::size_t i = 0; i < hazard_true.size(); ++i) {
        if (hazard_pred[i] == hazard_true[i]) {
            pt_masked.push_back(product_true[i]);
            pp_masked.push_back(product_pred[i]);
        }
    }
    report.n_correct_hazard = pt_masked.size();
    if (pt_masked.empty()) {
        std::cerr << "warning: no correct hazard predictions; product term scored 0\n";
        report.f1_product_on_correct_hazard = 0.0;
    } else {
        report.f1_product_on_correct_hazard = f1_macro(pt_masked, pp_masked);
        report.per_class_product = per_class_metrics(pt_masked, pp_masked);
    }
    report.combined = (report.f1_hazard + report.f1_product_on_correct_hazard) / 2.0;
    return report;
}

nlohmann::json GroupedConfusion::to_json() const {
    return nlohmann::json{{"minority_correct", minority_correct},
                          {"minority_total", minority_total},
                          {"majority_correct", majority_correct},
                          {"majority_total", majority_total},
                          {"minority_classes", minority_classes}};
}

GroupedConfusion grouped_confusion(std::span<const std::string> gold,
                                   std::span<const std::string> pred,
                                   const std::set<std::string>& minority_classes) {
    if (gold.size() != pred.size()) {
        throw DimensionError("gold/prediction length mismatch in grouped confusion");
    }
    GroupedConfusion out;
    out.minority_classes.assign(minority_classes.begin(), minority_classes.end());
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const bool minority = minority_classes.count(gold[i]) > 0;
        const bool correct = gold[i] == pred[i];
        if (minority) {
            out.minority_total++;
            if (correct) out.minority_correct++;
        } else {
            out.majority_total++;
            if (correct) out.majority_correct++;
        }
    }
    return out;
}

namespace {

// Regularized incomplete gamma functions, series + continued fraction.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi2_survival(double x, int dof) {
    if (x <= 0.0) return 1.0;
    const double a = static_cast<double>(dof) / 2.0;
    const double half = x / 2.0;
    if (half < a + 1.0) return 1.0 - gamma_p_series(a, half);
    return gamma_q_contfrac(a, half);
}

KruskalResult kruskal_wallis_2group(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw DimensionError("Kruskal-Wallis needs at least two values per group");
    }
    struct Entry {
        double value;
        int group;
    };
    std::vector<Entry> entries;
    entries.reserve(a.size() + b.size());
    for (double v : a) entries.push_back({v, 0});
    for (double v : b) entries.push_back({v, 1});
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& x, const Entry& y) { return x.value < y.value; });

    const std::size_t n = entries.size();
    std::vector<double> ranks(n, 0.0);
    double tie_sum = 0.0;  // sum of t^3 - t over tie groups
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && entries[j].value == entries[i].value) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[k] = midrank;
        const double t = static_cast<double>(j - i);
        tie_sum += t * t * t - t;
        i = j;
    }

    double rank_sum[2] = {0.0, 0.0};
    const double counts[2] = {static_cast<double>(a.size()), static_cast<double>(b.size())};
    for (std::size_t i = 0; i < n; ++i) rank_sum[entries[i].group] += ranks[i];

    const double nn = static_cast<double>(n);
    double h = 0.0;
    for (int g = 0; g < 2; ++g) h += rank_sum[g] * rank_sum[g] / counts[g];
    h = 12.0 / (nn * (nn + 1.0)) * h - 3.0 * (nn + 1.0);

    const double correction = 1.0 - tie_sum / (nn * nn * nn - nn);
    if (correction <= 0.0) {
        return {0.0, 1.0};  // every value tied
    }
    h /= correction;
    if (h < 0.0) h = 0.0;  // guard against rounding just below zero
    return {h, chi2_survival(h, 1)};
}

}  // namespace foodhazard
