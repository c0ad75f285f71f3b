#include <algorithm>
#include <cmath>

#include "foodhazard/error.hpp"
#include "foodhazard/models.hpp"

namespace foodhazard {

namespace {

constexpr double kZeroDistance = 1e-12;

class KnnClassifier : public Classifier {
public:
    KnnClassifier(std::vector<std::string> labels, SparseMatrix train,
                  std::vector<std::uint32_t> y, int n_neighbors, KnnWeighting weighting)
        : Classifier(Family::Knn, std::move(labels)),
          train_(std::move(train)),
          y_(std::move(y)),
          n_neighbors_(n_neighbors),
          weighting_(weighting) {}

    std::vector<std::string> predict(const SparseMatrix& X) const override {
        if (X.rows > 0 && X.cols != train_.cols) {
            throw DimensionError("knn model expects " + std::to_string(train_.cols) +
                                 " features, got " + std::to_string(X.cols));
        }
        std::vector<std::string> out;
        out.reserve(X.rows);
        std::vector<std::pair<double, std::size_t>> dist(train_.rows);
        for (std::size_t r = 0; r < X.rows; ++r) {
            const double q_norm_sq = squared_norm(X, r);
            for (std::size_t t = 0; t < train_.rows; ++t) {
                double d2 = q_norm_sq + squared_norm(train_, t) - 2.0 * dot(X, r, t);
                if (d2 < 0.0) d2 = 0.0;
                dist[t] = {std::sqrt(d2), t};
            }
            const std::size_t k = std::min<std::size_t>(
                static_cast<std::size_t>(n_neighbors_), train_.rows);
            std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                              dist.end());
            out.push_back(labels_[vote(dist, k)]);
        }
        return out;
    }

    nlohmann::json to_json() const override {
        return nlohmann::json{{"format_version", 1},
                              {"family", to_string(family_)},
                              {"labels", labels_},
                              {"n_neighbors", n_neighbors_},
                              {"weights", weighting_ == KnnWeighting::Distance ? "distance" : "uniform"},
                              {"y", y_},
                              {"matrix",
                               {{"rows", train_.rows},
                                {"cols", train_.cols},
                                {"row_ptr", train_.row_ptr},
                                {"col", train_.col},
                                {"val", train_.val}}}};
    }

private:
    double squared_norm(const SparseMatrix& m, std::size_t r) const {
        double sq = 0.0;
        for (std::size_t i = m.row_begin(r); i < m.row_end(r); ++i) sq += m.val[i] * m.val[i];
        return sq;
    }

    // Sparse dot between query row and training row (both column-sorted).
    double dot(const SparseMatrix& X, std::size_t qr, std::size_t tr) const {
        std::size_t i = X.row_begin(qr);
        std::size_t j = train_.row_begin(tr);
        const std::size_t i_end = X.row_end(qr);
        const std::size_t j_end = train_.row_end(tr);
        double sum = 0.0;
        while (i < i_end && j < j_end) {
            if (X.col[i] < train_.col[j]) {
                ++i;
            } else if (X.col[i] > train_.col[j]) {
                ++j;
            } else {
                sum += X.val[i] * train_.val[j];
                ++i;
                ++j;
            }
        }
        return sum;
    }

    std::size_t vote(const std::vector<std::pair<double, std::size_t>>& dist,
                     std::size_t k) const {
        std::vector<double> mass(labels_.size(), 0.0);
        if (weighting_ == KnnWeighting::Distance) {
            // Exact matches dominate: mass collapses onto zero-distance
            // neighbors when any exist.
            bool exact = false;
            for (std::size_t i = 0; i < k; ++i) {
                if (dist[i].first <= kZeroDistance) {
                    exact = true;
                    break;
                }
            }
            for (std::size_t i = 0; i < k; ++i) {
                const auto [d, idx] = dist[i];
                if (exact) {
                    if (d <= kZeroDistance) mass[y_[idx]] += 1.0;
                } else {
                    mass[y_[idx]] += 1.0 / d;
                }
            }
        } else {
            for (std::size_t i = 0; i < k; ++i) mass[y_[dist[i].second]] += 1.0;
        }
        std::size_t best = 0;
        for (std::size_t c = 1; c < mass.size(); ++c) {
            if (mass[c] > mass[best]) best = c;
        }
        return best;
    }

    SparseMatrix train_;
    std::vector<std::uint32_t> y_;
    int n_neighbors_;
    KnnWeighting weighting_;
};

}  // namespace

namespace detail {

std::unique_ptr<Classifier> train_knn(const ClassifierConfig& config, const SparseMatrix& X,
                                      const LabeledData& data) {
    return std::make_unique<KnnClassifier>(data.labels, X, data.y, config.n_neighbors,
                                           config.weights);
}

std::unique_ptr<Classifier> knn_from_json(const nlohmann::json& j) {
    SparseMatrix m;
    const auto& mat = j.at("matrix");
    m.rows = mat.at("rows").get<std::size_t>();
    m.cols = mat.at("cols").get<std::size_t>();
    m.row_ptr = mat.at("row_ptr").get<std::vector<std::size_t>>();
    m.col = mat.at("col").get<std::vector<std::uint32_t>>();
    m.val = mat.at("val").get<std::vector<double>>();
    return std::make_unique<KnnClassifier>(
        j.at("labels").get<std::vector<std::string>>(), std::move(m),
        j.at("y").get<std::vector<std::uint32_t>>(), j.at("n_neighbors").get<int>(),
        j.at("weights").get<std::string>() == "distance" ? KnnWeighting::Distance
                                                         : KnnWeighting::Uniform);
}

}  // namespace detail

}  // namespace foodhazard
