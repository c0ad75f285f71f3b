#include <algorithm>
#include <cmath>

#include "foodhazard/error.hpp"
#include "foodhazard/models.hpp"

namespace foodhazard {

namespace {

class MultinomialNbClassifier : public Classifier {
public:
    MultinomialNbClassifier(std::vector<std::string> labels, std::vector<double> log_prior,
                            std::vector<std::vector<double>> feature_log_prob)
        : Classifier(Family::MultinomialNb, std::move(labels)),
          log_prior_(std::move(log_prior)),
          feature_log_prob_(std::move(feature_log_prob)) {}

    std::vector<std::string> predict(const SparseMatrix& X) const override {
        std::vector<std::string> out;
        out.reserve(X.rows);
        for (std::size_t r = 0; r < X.rows; ++r) {
            const auto joint = log_joint(X, r);
            std::size_t best = 0;
            for (std::size_t c = 1; c < joint.size(); ++c) {
                if (joint[c] > joint[best]) best = c;
            }
            out.push_back(labels_[best]);
        }
        return out;
    }

    std::vector<double> log_joint(const SparseMatrix& X, std::size_t row) const {
        if (X.cols != feature_log_prob_.front().size()) {
            throw DimensionError("naive bayes model expects " +
                                 std::to_string(feature_log_prob_.front().size()) +
                                 " features, got " + std::to_string(X.cols));
        }
        std::vector<double> joint(log_prior_);
        for (std::size_t i = X.row_begin(row); i < X.row_end(row); ++i) {
            for (std::size_t c = 0; c < joint.size(); ++c) {
                joint[c] += X.val[i] * feature_log_prob_[c][X.col[i]];
            }
        }
        return joint;
    }

    nlohmann::json to_json() const override {
        return nlohmann::json{{"format_version", 1},
                              {"family", to_string(family_)},
                              {"labels", labels_},
                              {"log_prior", log_prior_},
                              {"feature_log_prob", feature_log_prob_}};
    }

private:
    std::vector<double> log_prior_;
    std::vector<std::vector<double>> feature_log_prob_;
};

}  // namespace

namespace detail {

// Multinomial model over the (non-negative) TF-IDF values with Lidstone
// smoothing alpha; class priors follow empirical frequencies.
std::unique_ptr<Classifier> train_multinomial_nb(const ClassifierConfig& config,
                                                 const SparseMatrix& X, const LabeledData& data) {
    const std::size_t d = X.cols;
    const std::size_t k = data.labels.size();

    std::vector<std::vector<double>> counts(k, std::vector<double>(d, 0.0));
    std::vector<double> class_count(k, 0.0);
    for (std::size_t r = 0; r < X.rows; ++r) {
        class_count[data.y[r]] += 1.0;
        auto& row = counts[data.y[r]];
        for (std::size_t i = X.row_begin(r); i < X.row_end(r); ++i) {
            if (X.val[i] < 0.0) {
                throw ConfigError("multinomial NB requires non-negative features");
            }
            row[X.col[i]] += X.val[i];
        }
    }

    std::vector<double> log_prior(k);
    std::vector<std::vector<double>> flp(k, std::vector<double>(d));
    for (std::size_t c = 0; c < k; ++c) {
        log_prior[c] = std::log(class_count[c] / static_cast<double>(X.rows));
        double total = 0.0;
        for (double v : counts[c]) total += v;
        const double denom = std::log(total + config.alpha * static_cast<double>(d));
        for (std::size_t f = 0; f < d; ++f) {
            flp[c][f] = std::log(counts[c][f] + config.alpha) - denom;
        }
    }
    return std::make_unique<MultinomialNbClassifier>(data.labels, std::move(log_prior),
                                                     std::move(flp));
}

std::unique_ptr<Classifier> nb_from_json(const nlohmann::json& j) {
    return std::make_unique<MultinomialNbClassifier>(
        j.at("labels").get<std::vector<std::string>>(),
        j.at("log_prior").get<std::vector<double>>(),
        j.at("feature_log_prob").get<std::vector<std::vector<double>>>());
}

}  // namespace detail

std::vector<std::vector<double>> nb_posteriors(const Classifier& model, const SparseMatrix& X) {
    const auto* nb = dynamic_cast<const MultinomialNbClassifier*>(&model);
    if (nb == nullptr) throw ConfigError("posteriors are only available for multinomial-nb");
    std::vector<std::vector<double>> out;
    out.reserve(X.rows);
    for (std::size_t r = 0; r < X.rows; ++r) {
        std::vector<double> joint = nb->log_joint(X, r);
        const double peak = *std::max_element(joint.begin(), joint.end());
        double z = 0.0;
        for (double v : joint) z += std::exp(v - peak);
        for (double& v : joint) v = std::exp(v - peak) / z;
        out.push_back(std::move(joint));
    }
    return out;
}

}  // namespace foodhazard
