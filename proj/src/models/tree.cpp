#include <algorithm>
#include <cmath>
#include <numeric>

#include "foodhazard/error.hpp"
#include "foodhazard/models.hpp"
#include "foodhazard/rng.hpp"

namespace foodhazard {

namespace {

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t label = 0;
};

nlohmann::json nodes_to_json(const std::vector<TreeNode>& nodes) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& n : nodes) {
        out.push_back({n.feature, n.threshold, n.left, n.right, n.label});
    }
    return out;
}

std::vector<TreeNode> nodes_from_json(const nlohmann::json& j) {
    std::vector<TreeNode> nodes;
    nodes.reserve(j.size());
    for (const auto& row : j) {
        TreeNode n;
        n.feature = row.at(0).get<std::int32_t>();
        n.threshold = row.at(1).get<double>();
        n.left = row.at(2).get<std::int32_t>();
        n.right = row.at(3).get<std::int32_t>();
        n.label = row.at(4).get<std::uint32_t>();
        nodes.push_back(n);
    }
    return nodes;
}

// Row lookup during tree descent; columns beyond the training width are
// never referenced, so wider prediction rows are tolerated.
std::uint32_t descend(const std::vector<TreeNode>& nodes, const SparseMatrix& X, std::size_t row) {
    std::int32_t at = 0;
    while (nodes[at].feature >= 0) {
        const double v = X.at(row, static_cast<std::uint32_t>(nodes[at].feature));
        at = v <= nodes[at].threshold ? nodes[at].left : nodes[at].right;
    }
    return nodes[at].label;
}

// Column-major copy of the training matrix for split search.
struct ColumnStore {
    std::vector<std::size_t> col_ptr;
    std::vector<std::uint32_t> row;
    std::vector<double> val;

    explicit ColumnStore(const SparseMatrix& X) {
        col_ptr.assign(X.cols + 1, 0);
        for (std::uint32_t c : X.col) col_ptr[c + 1]++;
        for (std::size_t c = 1; c <= X.cols; ++c) col_ptr[c] += col_ptr[c - 1];
        row.resize(X.col.size());
        val.resize(X.col.size());
        std::vector<std::size_t> next(col_ptr.begin(), col_ptr.end() - 1);
        for (std::size_t r = 0; r < X.rows; ++r) {
            for (std::size_t i = X.row_begin(r); i < X.row_end(r); ++i) {
                const std::size_t slot = next[X.col[i]]++;
                row[slot] = static_cast<std::uint32_t>(r);
                val[slot] = X.val[i];
            }
        }
    }
};

struct SplitChoice {
    bool found = false;
    std::uint32_t feature = 0;
    double threshold = 0.0;
    double score = 0.0;  // sum_sq_left/WL + sum_sq_right/WR, higher is better
};

using RowWeight = std::pair<std::uint32_t, double>;

// Weighted-Gini CART over sparse columns (absent = 0). Class weights enter
// through the per-row weights.
class TreeBuilder {
public:
    TreeBuilder(const SparseMatrix& X, const ColumnStore& columns, std::size_t n_classes,
                int max_depth)
        : X_(X),
          columns_(columns),
          n_classes_(n_classes),
          max_depth_(max_depth),
          membership_(X.rows, 0),
          row_weight_(X.rows, 0.0),
          left_class_weight_(n_classes, 0.0),
          present_class_weight_(n_classes, 0.0) {}

    std::vector<TreeNode> build(std::vector<RowWeight> rows, const std::vector<std::uint32_t>& y,
                                const std::vector<std::uint32_t>* feature_pool, Rng* rng) {
        y_ = &y;
        feature_pool_ = feature_pool;
        rng_ = rng;
        nodes_.clear();

        struct Task {
            std::vector<RowWeight> rows;
            int depth;
            std::int32_t parent;
            bool is_left;
        };
        std::vector<Task> stack;
        stack.push_back({std::move(rows), 0, -1, false});
        while (!stack.empty()) {
            Task task = std::move(stack.back());
            stack.pop_back();
            const std::int32_t id = open_node(task.rows);
            if (task.parent >= 0) {
                (task.is_left ? nodes_[task.parent].left : nodes_[task.parent].right) = id;
            }

            std::size_t live = 0;
            for (double w : node_class_weight_) live += w > 0.0 ? 1 : 0;
            if (task.depth >= max_depth_ || task.rows.size() < 2 || live < 2) continue;

            const SplitChoice split = best_split(task.rows);
            if (!split.found) continue;

            std::vector<RowWeight> left_rows;
            std::vector<RowWeight> right_rows;
            for (const auto& entry : task.rows) {
                const double v = X_.at(entry.first, split.feature);
                (v <= split.threshold ? left_rows : right_rows).push_back(entry);
            }
            if (left_rows.empty() || right_rows.empty()) continue;

            nodes_[id].feature = static_cast<std::int32_t>(split.feature);
            nodes_[id].threshold = split.threshold;
            // Right is pushed first so the left child is grown (and numbered)
            // before the right one, matching recursive construction order.
            stack.push_back({std::move(right_rows), task.depth + 1, id, false});
            stack.push_back({std::move(left_rows), task.depth + 1, id, true});
        }
        return std::move(nodes_);
    }

private:
    std::int32_t open_node(const std::vector<RowWeight>& rows) {
        node_class_weight_.assign(n_classes_, 0.0);
        for (const auto& [r, w] : rows) node_class_weight_[(*y_)[r]] += w;
        std::size_t best = 0;
        for (std::size_t c = 1; c < n_classes_; ++c) {
            if (node_class_weight_[c] > node_class_weight_[best]) best = c;
        }
        const auto id = static_cast<std::int32_t>(nodes_.size());
        nodes_.emplace_back();
        nodes_[id].label = static_cast<std::uint32_t>(best);
        return id;
    }

    SplitChoice best_split(const std::vector<RowWeight>& rows) {
        ++stamp_;
        double node_weight = 0.0;
        double node_sq = 0.0;
        live_classes_.clear();
        for (std::size_t c = 0; c < n_classes_; ++c) {
            const double w = node_class_weight_[c];
            if (w > 0.0) live_classes_.push_back(static_cast<std::uint32_t>(c));
            node_weight += w;
            node_sq += w * w;
        }
        for (const auto& [r, w] : rows) {
            membership_[r] = stamp_;
            row_weight_[r] = w;
        }
        const double base_score = node_sq / node_weight;

        SplitChoice best;
        auto consider = [&](std::uint32_t feature) {
            evaluate_feature(feature, node_weight, node_sq, base_score, best);
        };
        if (feature_pool_ == nullptr) {
            for (std::uint32_t f = 0; f < X_.cols; ++f) consider(f);
        } else {
            const auto k = static_cast<std::size_t>(
                std::ceil(std::sqrt(static_cast<double>(feature_pool_->size()))));
            for (std::size_t pick : rng_->sample_indices(feature_pool_->size(), k)) {
                consider((*feature_pool_)[pick]);
            }
        }
        return best;
    }

    void evaluate_feature(std::uint32_t feature, double node_weight, double node_sq,
                          double base_score, SplitChoice& best) {
        present_.clear();
        touched_present_.clear();
        double present_weight = 0.0;
        for (std::size_t i = columns_.col_ptr[feature]; i < columns_.col_ptr[feature + 1]; ++i) {
            const std::uint32_t r = columns_.row[i];
            if (membership_[r] != stamp_) continue;
            const double w = row_weight_[r];
            const std::uint32_t cls = (*y_)[r];
            if (present_class_weight_[cls] == 0.0) touched_present_.push_back(cls);
            present_class_weight_[cls] += w;
            present_.push_back({columns_.val[i], r});
            present_weight += w;
        }
        if (present_.empty()) return;  // feature all-zero inside the node
        std::sort(present_.begin(), present_.end());
        const double zero_weight = node_weight - present_weight;

        double left_weight_total = 0.0;
        double sum_sq_left = 0.0;
        double cross = 0.0;  // sum over classes of node_class_weight[c] * left[c]
        touched_left_.clear();

        auto push_class = [&](std::uint32_t cls, double w) {
            const double old = left_class_weight_[cls];
            if (old == 0.0) touched_left_.push_back(cls);
            sum_sq_left += 2.0 * old * w + w * w;
            cross += node_class_weight_[cls] * w;
            left_class_weight_[cls] = old + w;
            left_weight_total += w;
        };
        auto flush = [&](double prev_value, double next_value) {
            const double right_weight_total = node_weight - left_weight_total;
            if (left_weight_total <= 0.0 || right_weight_total <= 0.0) return;
            const double sum_sq_right = node_sq - 2.0 * cross + sum_sq_left;
            const double score =
                sum_sq_left / left_weight_total + sum_sq_right / right_weight_total;
            if (score <= base_score + 1e-12) return;  // no impurity decrease
            if (!best.found || score > best.score + 1e-15) {
                best.found = true;
                best.feature = feature;
                best.threshold = (prev_value + next_value) / 2.0;
                best.score = score;
            }
        };

        double prev = 0.0;
        bool have_prev = false;
        bool zero_done = zero_weight <= 0.0;
        auto push_zero_block = [&] {
            for (std::uint32_t cls : live_classes_) {
                const double w = node_class_weight_[cls] - present_class_weight_[cls];
                if (w > 0.0) push_class(cls, w);
            }
            prev = 0.0;
            have_prev = true;
            zero_done = true;
        };

        std::size_t i = 0;
        while (i < present_.size()) {
            const double value = present_[i].first;
            if (!zero_done && value > 0.0) {
                if (have_prev) flush(prev, 0.0);
                push_zero_block();
            }
            if (have_prev) flush(prev, value);
            while (i < present_.size() && present_[i].first == value) {
                const std::uint32_t r = present_[i].second;
                push_class((*y_)[r], row_weight_[r]);
                ++i;
            }
            prev = value;
            have_prev = true;
        }
        if (!zero_done) {
            flush(prev, 0.0);
            push_zero_block();
        }

        for (std::uint32_t cls : touched_left_) left_class_weight_[cls] = 0.0;
        for (std::uint32_t cls : touched_present_) present_class_weight_[cls] = 0.0;
    }

    const SparseMatrix& X_;
    const ColumnStore& columns_;
    std::size_t n_classes_;
    int max_depth_;
    const std::vector<std::uint32_t>* y_ = nullptr;
    const std::vector<std::uint32_t>* feature_pool_ = nullptr;
    Rng* rng_ = nullptr;

    std::vector<TreeNode> nodes_;
    std::vector<std::uint32_t> membership_;
    std::uint32_t stamp_ = 0;
    std::vector<double> row_weight_;
    std::vector<double> node_class_weight_;
    std::vector<double> left_class_weight_;
    std::vector<double> present_class_weight_;
    std::vector<std::uint32_t> live_classes_;
    std::vector<std::pair<double, std::uint32_t>> present_;
    std::vector<std::uint32_t> touched_left_;
    std::vector<std::uint32_t> touched_present_;
};

class DecisionTreeClassifier : public Classifier {
public:
    DecisionTreeClassifier(std::vector<std::string> labels, std::vector<TreeNode> nodes)
        : Classifier(Family::DecisionTree, std::move(labels)), nodes_(std::move(nodes)) {}

    std::vector<std::string> predict(const SparseMatrix& X) const override {
        std::vector<std::string> out;
        out.reserve(X.rows);
        for (std::size_t r = 0; r < X.rows; ++r) {
            out.push_back(labels_[descend(nodes_, X, r)]);
        }
        return out;
    }

    nlohmann::json to_json() const override {
        return nlohmann::json{{"format_version", 1},
                              {"family", to_string(family_)},
                              {"labels", labels_},
                              {"nodes", nodes_to_json(nodes_)}};
    }

private:
    std::vector<TreeNode> nodes_;
};

class RandomForestClassifier : public Classifier {
public:
    RandomForestClassifier(std::vector<std::string> labels,
                           std::vector<std::vector<TreeNode>> trees)
        : Classifier(Family::RandomForest, std::move(labels)), trees_(std::move(trees)) {}

    std::vector<std::string> predict(const SparseMatrix& X) const override {
        std::vector<std::string> out;
        out.reserve(X.rows);
        std::vector<std::size_t> votes(labels_.size());
        for (std::size_t r = 0; r < X.rows; ++r) {
            std::fill(votes.begin(), votes.end(), 0);
            for (const auto& tree : trees_) votes[descend(tree, X, r)]++;
            std::size_t best = 0;
            for (std::size_t c = 1; c < votes.size(); ++c) {
                if (votes[c] > votes[best]) best = c;
            }
            out.push_back(labels_[best]);
        }
        return out;
    }

    nlohmann::json to_json() const override {
        nlohmann::json trees = nlohmann::json::array();
        for (const auto& tree : trees_) trees.push_back(nodes_to_json(tree));
        return nlohmann::json{{"format_version", 1},
                              {"family", to_string(family_)},
                              {"labels", labels_},
                              {"trees", trees}};
    }

private:
    std::vector<std::vector<TreeNode>> trees_;
};

}  // namespace

namespace detail {

std::unique_ptr<Classifier> train_decision_tree(const ClassifierConfig& config,
                                                const SparseMatrix& X, const LabeledData& data) {
    ColumnStore columns(X);
    TreeBuilder builder(X, columns, data.labels.size(), config.max_depth);
    std::vector<RowWeight> rows;
    rows.reserve(X.rows);
    for (std::size_t r = 0; r < X.rows; ++r) {
        rows.push_back({static_cast<std::uint32_t>(r), data.sample_weight[r]});
    }
    return std::make_unique<DecisionTreeClassifier>(
        data.labels, builder.build(std::move(rows), data.y, nullptr, nullptr));
}

std::unique_ptr<Classifier> train_random_forest(const ClassifierConfig& config,
                                                const SparseMatrix& X, const LabeledData& data) {
    ColumnStore columns(X);
    TreeBuilder builder(X, columns, data.labels.size(), config.max_depth);

    std::vector<std::uint32_t> all_features(X.cols);
    std::iota(all_features.begin(), all_features.end(), 0);

    std::vector<std::vector<TreeNode>> trees;
    trees.reserve(static_cast<std::size_t>(config.n_estimators));
    std::vector<std::size_t> draw_count(X.rows);
    for (int t = 0; t < config.n_estimators; ++t) {
        Rng rng(mix64(config.seed + static_cast<std::uint64_t>(t) * 0x9e3779b9ULL));
        std::vector<RowWeight> rows;
        if (config.bootstrap) {
            std::fill(draw_count.begin(), draw_count.end(), 0);
            for (std::size_t i = 0; i < X.rows; ++i) draw_count[rng.index(X.rows)]++;
            for (std::size_t r = 0; r < X.rows; ++r) {
                if (draw_count[r] > 0) {
                    rows.push_back({static_cast<std::uint32_t>(r),
                                    static_cast<double>(draw_count[r]) * data.sample_weight[r]});
                }
            }
        } else {
            for (std::size_t r = 0; r < X.rows; ++r) {
                rows.push_back({static_cast<std::uint32_t>(r), data.sample_weight[r]});
            }
        }
        const bool subsample = config.feature_subsample == FeatureSubsample::Sqrt;
        trees.push_back(builder.build(std::move(rows), data.y, subsample ? &all_features : nullptr,
                                      subsample ? &rng : nullptr));
    }
    return std::make_unique<RandomForestClassifier>(data.labels, std::move(trees));
}

std::unique_ptr<Classifier> tree_from_json(const nlohmann::json& j) {
    return std::make_unique<DecisionTreeClassifier>(j.at("labels").get<std::vector<std::string>>(),
                                                    nodes_from_json(j.at("nodes")));
}

std::unique_ptr<Classifier> forest_from_json(const nlohmann::json& j) {
    std::vector<std::vector<TreeNode>> trees;
    for (const auto& tree : j.at("trees")) trees.push_back(nodes_from_json(tree));
    return std::make_unique<RandomForestClassifier>(j.at("labels").get<std::vector<std::string>>(),
                                                    std::move(trees));
}

}  // namespace detail

}  // namespace foodhazard
