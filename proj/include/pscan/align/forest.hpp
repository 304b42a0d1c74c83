#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "pscan/align/matrix.hpp"
#include "pscan/align/stats.hpp"
#include "pscan/util/errors.hpp"
#include "pscan/util/random.hpp"

namespace pscan::align {

enum class MaxFeatures { sqrt_rule, all };

struct ForestParams {
    size_t n_trees = 200;
    MaxFeatures max_features = MaxFeatures::sqrt_rule;
    bool bootstrap = true;
    uint64_t seed = 17;
    size_t max_depth = 0;  // 0 = unlimited
};

namespace detail {

inline double gini(size_t pos, size_t total) {
    if (total == 0) return 0.0;
    double p = static_cast<double>(pos) / static_cast<double>(total);
    return 2.0 * p * (1.0 - p);
}

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    bool leaf_value = false;
};

class DecisionTree {
  public:
    // importances accumulates weighted impurity decreases; n_total is the
    // tree's training-sample size.
    void train(const std::vector<std::vector<double>>& X, const std::vector<bool>& y,
               std::vector<size_t> rows, const ForestParams& params, Rng& rng,
               std::vector<double>& importances) {
        n_total_ = rows.size();
        grow(X, y, std::move(rows), params, rng, importances, 1);
    }

    bool predict(const std::vector<double>& x) const {
        int node = 0;
        while (nodes_[node].feature >= 0)
            node = x[nodes_[node].feature] <= nodes_[node].threshold ? nodes_[node].left
                                                                     : nodes_[node].right;
        return nodes_[node].leaf_value;
    }

  private:
    struct Split {
        bool found = false;
        size_t feature = 0;
        double threshold = 0.0;
        double decrease = 0.0;  // impurity decrease, unweighted by node share
    };

    int grow(const std::vector<std::vector<double>>& X, const std::vector<bool>& y,
             std::vector<size_t> rows, const ForestParams& params, Rng& rng,
             std::vector<double>& importances, size_t depth) {
        size_t pos = 0;
        for (size_t r : rows) pos += y[r];

        int index = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        // Majority with ties to false keeps predictions deterministic.
        nodes_[index].leaf_value = 2 * pos > rows.size();

        if (pos == 0 || pos == rows.size() || rows.size() < 2) return index;
        if (params.max_depth != 0 && depth > params.max_depth) return index;

        auto split = best_split(X, y, rows, params, rng);
        if (!split.found) return index;

        std::vector<size_t> left_rows, right_rows;
        for (size_t r : rows) {
            if (X[r][split.feature] <= split.threshold) left_rows.push_back(r);
            else right_rows.push_back(r);
        }
        importances[split.feature] +=
            (static_cast<double>(rows.size()) / static_cast<double>(n_total_)) * split.decrease;

        nodes_[index].feature = static_cast<int>(split.feature);
        nodes_[index].threshold = split.threshold;
        rows.clear();
        rows.shrink_to_fit();
        int left = grow(X, y, std::move(left_rows), params, rng, importances, depth + 1);
        nodes_[index].left = left;
        int right = grow(X, y, std::move(right_rows), params, rng, importances, depth + 1);
        nodes_[index].right = right;
        return index;
    }

    Split best_split(const std::vector<std::vector<double>>& X, const std::vector<bool>& y,
                     const std::vector<size_t>& rows, const ForestParams& params, Rng& rng) {
        const size_t n_features = X.empty() ? 0 : X[0].size();
        std::vector<size_t> candidates(n_features);
        std::iota(candidates.begin(), candidates.end(), 0);
        size_t take = n_features;
        if (params.max_features == MaxFeatures::sqrt_rule) {
            take = std::max<size_t>(
                1, static_cast<size_t>(std::sqrt(static_cast<double>(n_features))));
            // Partial Fisher-Yates; only the first `take` entries are used.
            for (size_t i = 0; i < take; ++i)
                std::swap(candidates[i], candidates[i + rng.bounded(n_features - i)]);
            candidates.resize(take);
            // Candidate order must not affect the winner: ties below break by
            // lowest feature index, so sort for a canonical scan order.
            std::sort(candidates.begin(), candidates.end());
        }

        const size_t total = rows.size();
        size_t total_pos = 0;
        for (size_t r : rows) total_pos += y[r];
        const double parent = gini(total_pos, total);

        Split best;
        std::vector<std::pair<double, bool>> values;
        values.reserve(total);
        for (size_t f : candidates) {
            values.clear();
            for (size_t r : rows) values.emplace_back(X[r][f], y[r]);
            std::sort(values.begin(), values.end());
            if (values.front().first == values.back().first) continue;

            size_t left_n = 0, left_pos = 0;
            for (size_t i = 0; i + 1 < values.size(); ++i) {
                left_n++;
                left_pos += values[i].second;
                if (values[i].first == values[i + 1].first) continue;
                double threshold = values[i].first +
                                   (values[i + 1].first - values[i].first) / 2.0;
                double child = (static_cast<double>(left_n) / total) * gini(left_pos, left_n) +
                               (static_cast<double>(total - left_n) / total) *
                                   gini(total_pos - left_pos, total - left_n);
                double decrease = parent - child;
                bool better = decrease > best.decrease + 1e-15;
                bool tie = !better && std::abs(decrease - best.decrease) <= 1e-15 &&
                           best.found &&
                           (f < best.feature || (f == best.feature && threshold < best.threshold));
                if (!best.found && decrease > 1e-15) better = true;
                if (better || tie) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = threshold;
                    best.decrease = decrease;
                }
            }
        }
        return best;
    }

    std::vector<TreeNode> nodes_;
    size_t n_total_ = 0;
};

}  // namespace detail

class RandomForest {
  public:
    void train(const std::vector<std::vector<double>>& X, const std::vector<bool>& y,
               const ForestParams& params) {
        if (X.size() != y.size()) throw DataError("feature and label counts differ");
        if (X.empty()) throw DataError("cannot train a forest on zero rows");
        size_t pos = 0;
        for (bool v : y) pos += v;
        if (pos == 0 || pos == y.size())
            throw DataError("training labels are single-class; forest undefined");

        const size_t n_features = X[0].size();
        params_ = params;
        trees_.clear();
        trees_.reserve(params.n_trees);
        raw_importances_.assign(n_features, 0.0);

        // Per-tree seeds come off the master stream up front, so the forest
        // is identical whether trees are grown in sequence or not.
        Rng master(params.seed);
        std::vector<uint64_t> tree_seeds(params.n_trees);
        for (auto& s : tree_seeds) s = master.next_u64();

        std::vector<size_t> all_rows(X.size());
        std::iota(all_rows.begin(), all_rows.end(), 0);
        for (size_t t = 0; t < params.n_trees; ++t) {
            Rng rng(tree_seeds[t]);
            std::vector<size_t> rows;
            if (params.bootstrap) {
                rows.resize(X.size());
                for (auto& r : rows) r = rng.bounded(X.size());
            } else {
                rows = all_rows;
            }
            detail::DecisionTree tree;
            tree.train(X, y, std::move(rows), params, rng, raw_importances_);
            trees_.push_back(std::move(tree));
        }
    }

    bool predict(const std::vector<double>& x) const {
        size_t votes = 0;
        for (const auto& tree : trees_) votes += tree.predict(x);
        return 2 * votes > trees_.size();  // tie goes to false
    }

    // Normalized total Gini decrease per feature across all trees.
    std::vector<double> importances() const {
        double total = 0.0;
        for (double v : raw_importances_) total += v;
        if (total <= 0.0)
            throw DataError("no informative splits; importances undefined");
        std::vector<double> out(raw_importances_.size());
        for (size_t i = 0; i < out.size(); ++i) out[i] = raw_importances_[i] / total;
        return out;
    }

    size_t tree_count() const { return trees_.size(); }

  private:
    std::vector<detail::DecisionTree> trees_;
    std::vector<double> raw_importances_;
    ForestParams params_;
};

// Encoded feature rows for a matrix, in matrix order.
inline std::vector<std::vector<double>> encode_features(const AnswerMatrix& m,
                                                        const Encoding& enc) {
    std::vector<std::vector<double>> X(m.rows(), std::vector<double>(m.cols()));
    for (size_t r = 0; r < m.rows(); ++r)
        for (size_t c = 0; c < m.cols(); ++c) X[r][c] = enc(m.cells[r][c].answer);
    return X;
}

struct RfScore {
    std::string question_id;
    double importance = 0.0;
};

inline std::vector<RfScore> rf_gini_importances(const AnswerMatrix& m, const Encoding& enc,
                                                const ForestParams& params,
                                                RandomForest* trained_out = nullptr) {
    m.validate();
    std::vector<bool> y(m.gold.begin(), m.gold.end());
    RandomForest forest;
    forest.train(encode_features(m, enc), y, params);
    auto imp = forest.importances();
    std::vector<RfScore> out;
    out.reserve(m.cols());
    for (size_t c = 0; c < m.cols(); ++c) out.push_back({m.question_ids[c], imp[c]});
    if (trained_out != nullptr) *trained_out = std::move(forest);
    return out;
}

}  // namespace pscan::align
