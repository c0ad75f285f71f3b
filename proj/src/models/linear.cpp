#include <algorithm>
#include <cmath>
#include <numeric>

#include "foodhazard/error.hpp"
#include "foodhazard/models.hpp"
#include "foodhazard/rng.hpp"

namespace foodhazard {

namespace {

// Shared by the OvR hinge model and multinomial softmax: dense per-class
// weight rows plus intercepts, argmax prediction with low-index tie break.
class LinearClassifier : public Classifier {
public:
    LinearClassifier(Family family, std::vector<std::string> labels,
                     std::vector<std::vector<double>> weights, std::vector<double> intercepts)
        : Classifier(family, std::move(labels)),
          weights_(std::move(weights)),
          intercepts_(std::move(intercepts)) {}

    std::vector<std::string> predict(const SparseMatrix& X) const override {
        if (X.rows > 0 && X.cols != weights_.front().size()) {
            throw DimensionError("linear model expects " +
                                 std::to_string(weights_.front().size()) + " features, got " +
                                 std::to_string(X.cols));
        }
        std::vector<std::string> out;
        out.reserve(X.rows);
        for (std::size_t r = 0; r < X.rows; ++r) {
            std::size_t best = 0;
            double best_score = score(r, X, 0);
            for (std::size_t c = 1; c < weights_.size(); ++c) {
                const double s = score(r, X, c);
                if (s > best_score) {
                    best_score = s;
                    best = c;
                }
            }
            out.push_back(labels_[best]);
        }
        return out;
    }

    nlohmann::json to_json() const override {
        return nlohmann::json{{"format_version", 1},
                              {"family", to_string(family_)},
                              {"labels", labels_},
                              {"weights", weights_},
                              {"intercepts", intercepts_}};
    }

private:
    double score(std::size_t row, const SparseMatrix& X, std::size_t cls) const {
        const auto& w = weights_[cls];
        double s = intercepts_[cls];
        for (std::size_t i = X.row_begin(row); i < X.row_end(row); ++i) {
            s += w[X.col[i]] * X.val[i];
        }
        return s;
    }

    std::vector<std::vector<double>> weights_;
    std::vector<double> intercepts_;
};

}  // namespace

namespace detail {

// One-vs-rest hinge loss with L2 strength 1/C, epoch-based subgradient
// descent on a Pegasos step schedule. The weight vector is kept as
// scale * direction so per-sample shrinkage is O(1); epoch-end iterates are
// averaged into the returned head. Stops early once an epoch runs without
// margin violations.
std::unique_ptr<Classifier> train_linear_svm(const ClassifierConfig& config, const SparseMatrix& X,
                                             const LabeledData& data) {
    const std::size_t n = X.rows;
    const std::size_t d = X.cols;
    const std::size_t k = data.labels.size();
    const double lambda = 1.0 / (config.C * static_cast<double>(n));

    std::vector<std::vector<double>> weights(k, std::vector<double>(d, 0.0));
    std::vector<double> intercepts(k, 0.0);

    std::vector<std::size_t> order(n);

    for (std::size_t cls = 0; cls < k; ++cls) {
        Rng rng(mix64(config.seed + cls));
        std::vector<double> v(d, 0.0);
        double scale = 1.0;
        double b = 0.0;
        std::vector<double> w_sum(d, 0.0);
        double b_sum = 0.0;
        std::size_t epochs_run = 0;
        std::size_t t = 0;

        std::iota(order.begin(), order.end(), 0);
        for (int epoch = 0; epoch < config.max_iter; ++epoch) {
            rng.shuffle(order);
            std::size_t violations = 0;
            for (std::size_t idx : order) {
                ++t;
                const double eta = 1.0 / (lambda * static_cast<double>(t));
                const double y = data.y[idx] == cls ? 1.0 : -1.0;
                double dot = 0.0;
                for (std::size_t i = X.row_begin(idx); i < X.row_end(idx); ++i) {
                    dot += v[X.col[i]] * X.val[i];
                }
                const double margin = y * (scale * dot + b);

                scale *= 1.0 - eta * lambda;
                if (scale < 1e-9) {
                    for (double& vi : v) vi *= scale;
                    scale = 1.0;
                }
                if (margin < 1.0) {
                    ++violations;
                    const double step = eta * data.sample_weight[idx] * y;
                    for (std::size_t i = X.row_begin(idx); i < X.row_end(idx); ++i) {
                        v[X.col[i]] += step / scale * X.val[i];
                    }
                    b += step;
                }
            }
            for (std::size_t i = 0; i < d; ++i) w_sum[i] += scale * v[i];
            b_sum += b;
            ++epochs_run;
            if (violations == 0) break;
        }
        for (std::size_t i = 0; i < d; ++i) {
            weights[cls][i] = w_sum[i] / static_cast<double>(epochs_run);
        }
        intercepts[cls] = b_sum / static_cast<double>(epochs_run);
    }
    return std::make_unique<LinearClassifier>(Family::LinearSvm, data.labels, std::move(weights),
                                              std::move(intercepts));
}

// Multinomial softmax with L2 strength 1/C, full-batch gradient descent with
// backtracking line search, capped at max_iter accepted steps.
std::unique_ptr<Classifier> train_logistic_regression(const ClassifierConfig& config,
                                                      const SparseMatrix& X,
                                                      const LabeledData& data) {
    const std::size_t n = X.rows;
    const std::size_t d = X.cols;
    const std::size_t k = data.labels.size();
    const double reg = 1.0 / (config.C * static_cast<double>(n));

    std::vector<double> w(k * d, 0.0);
    std::vector<double> b(k, 0.0);
    std::vector<double> logits(k);
    std::vector<double> probs(n * k);

    auto evaluate = [&](const std::vector<double>& wv, const std::vector<double>& bv,
                        std::vector<double>* probs_out) {
        double loss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < k; ++c) logits[c] = bv[c];
            for (std::size_t i = X.row_begin(r); i < X.row_end(r); ++i) {
                const std::size_t col = X.col[i];
                const double x = X.val[i];
                for (std::size_t c = 0; c < k; ++c) logits[c] += wv[c * d + col] * x;
            }
            const double peak = *std::max_element(logits.begin(), logits.end());
            double z = 0.0;
            for (std::size_t c = 0; c < k; ++c) z += std::exp(logits[c] - peak);
            const double log_z = std::log(z) + peak;
            loss -= data.sample_weight[r] * (logits[data.y[r]] - log_z);
            if (probs_out != nullptr) {
                for (std::size_t c = 0; c < k; ++c) {
                    (*probs_out)[r * k + c] = std::exp(logits[c] - log_z);
                }
            }
        }
        loss /= static_cast<double>(n);
        double sq = 0.0;
        for (double v : wv) sq += v * v;
        return loss + 0.5 * reg * sq;
    };

    std::vector<double> grad_w(k * d);
    std::vector<double> grad_b(k);
    std::vector<double> w_try(k * d);
    std::vector<double> b_try(k);

    double loss = evaluate(w, b, &probs);
    double step = 1.0;
    for (int iter = 0; iter < config.max_iter; ++iter) {
        std::fill(grad_w.begin(), grad_w.end(), 0.0);
        std::fill(grad_b.begin(), grad_b.end(), 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            const double wgt = data.sample_weight[r] / static_cast<double>(n);
            for (std::size_t c = 0; c < k; ++c) {
                const double delta = wgt * (probs[r * k + c] - (data.y[r] == c ? 1.0 : 0.0));
                grad_b[c] += delta;
                if (delta == 0.0) continue;
                double* row = grad_w.data() + c * d;
                for (std::size_t i = X.row_begin(r); i < X.row_end(r); ++i) {
                    row[X.col[i]] += delta * X.val[i];
                }
            }
        }
        for (std::size_t i = 0; i < grad_w.size(); ++i) grad_w[i] += reg * w[i];

        double grad_sq = 0.0;
        for (double g : grad_w) grad_sq += g * g;
        for (double g : grad_b) grad_sq += g * g;
        if (grad_sq < 1e-10) break;

        step = std::min(step * 2.0, 1e4);
        bool accepted = false;
        for (int back = 0; back < 40; ++back) {
            for (std::size_t i = 0; i < w.size(); ++i) w_try[i] = w[i] - step * grad_w[i];
            for (std::size_t i = 0; i < b.size(); ++i) b_try[i] = b[i] - step * grad_b[i];
            const double trial = evaluate(w_try, b_try, nullptr);
            if (trial <= loss - 1e-4 * step * grad_sq) {
                w.swap(w_try);
                b.swap(b_try);
                const double prev = loss;
                loss = evaluate(w, b, &probs);
                accepted = true;
                if (prev - loss < 1e-9 * std::max(1.0, std::fabs(prev))) iter = config.max_iter;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }

    std::vector<std::vector<double>> weights(k, std::vector<double>(d));
    for (std::size_t c = 0; c < k; ++c) {
        std::copy(w.begin() + static_cast<std::ptrdiff_t>(c * d),
                  w.begin() + static_cast<std::ptrdiff_t>((c + 1) * d), weights[c].begin());
    }
    return std::make_unique<LinearClassifier>(Family::LogisticRegression, data.labels,
                                              std::move(weights), std::move(b));
}

std::unique_ptr<Classifier> linear_from_json(const nlohmann::json& j) {
    return std::make_unique<LinearClassifier>(
        family_from_string(j.at("family").get<std::string>()),
        j.at("labels").get<std::vector<std::string>>(),
        j.at("weights").get<std::vector<std::vector<double>>>(),
        j.at("intercepts").get<std::vector<double>>());
}

}  // namespace detail

}  // namespace foodhazard
