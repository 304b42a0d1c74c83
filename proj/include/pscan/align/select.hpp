#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pscan/align/forest.hpp"
#include "pscan/align/matrix.hpp"
#include "pscan/align/stats.hpp"
#include "pscan/util/errors.hpp"
#include "pscan/util/io.hpp"

namespace pscan::align {

// "Q12" orders after "Q9": ids compare by their numeric suffix, falling back
// to the full string when the numbers tie or are absent.
inline bool question_id_less(const std::string& a, const std::string& b) {
    auto numeric = [](const std::string& id) -> long long {
        if (id.size() < 2 || id[0] != 'Q') return -1;
        long long v = 0;
        for (size_t i = 1; i < id.size(); ++i) {
            if (id[i] < '0' || id[i] > '9') return -1;
            v = v * 10 + (id[i] - '0');
        }
        return v;
    };
    long long na = numeric(a), nb = numeric(b);
    if (na >= 0 && nb >= 0 && na != nb) return na < nb;
    if ((na >= 0) != (nb >= 0)) return na >= 0;  // well-formed ids sort first
    return a < b;
}

struct FeatureScore {
    std::string question_id;
    double anova_f = 0.0;
    bool anova_infinite = false;
    double rf_importance = 0.0;
    size_t anova_rank = 0;  // 1 = best
    size_t rf_rank = 0;

    bool operator==(const FeatureScore&) const = default;
};

// Joins the two scorers and assigns dense 1..Q ranks.  The infinity sentinel
// outranks every finite F; all remaining ties break by question id.
inline std::vector<FeatureScore> compute_feature_scores(const std::vector<AnovaScore>& anova,
                                                        const std::vector<RfScore>& rf) {
    if (anova.size() != rf.size())
        throw DataError("ANOVA and forest scorers cover different question counts");
    std::vector<FeatureScore> scores;
    scores.reserve(anova.size());
    std::map<std::string, const RfScore*> rf_by_id;
    for (const auto& s : rf) rf_by_id[s.question_id] = &s;
    for (const auto& a : anova) {
        auto it = rf_by_id.find(a.question_id);
        if (it == rf_by_id.end())
            throw DataError("forest scores missing question '" + a.question_id + "'");
        FeatureScore fs;
        fs.question_id = a.question_id;
        fs.anova_f = a.f;
        fs.anova_infinite = a.infinite;
        fs.rf_importance = it->second->importance;
        scores.push_back(std::move(fs));
    }

    std::vector<size_t> order(scores.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    auto rank_with = [&](auto better, auto assign) {
        std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
            if (better(scores[x], scores[y])) return true;
            if (better(scores[y], scores[x])) return false;
            return question_id_less(scores[x].question_id, scores[y].question_id);
        });
        for (size_t pos = 0; pos < order.size(); ++pos) assign(scores[order[pos]], pos + 1);
    };
    rank_with(
        [](const FeatureScore& x, const FeatureScore& y) {
            if (x.anova_infinite != y.anova_infinite) return x.anova_infinite;
            return x.anova_f > y.anova_f;
        },
        [](FeatureScore& s, size_t rank) { s.anova_rank = rank; });
    rank_with([](const FeatureScore& x, const FeatureScore& y) {
        return x.rf_importance > y.rf_importance;
    },
              [](FeatureScore& s, size_t rank) { s.rf_rank = rank; });
    return scores;
}

struct SelectionResult {
    std::set<std::string> selected;
    size_t k_anova = 0;
    size_t k_rf = 0;
    uint64_t seed = 0;
};

// Union of the top-k questions under each scorer.
inline SelectionResult select_top_union(const std::vector<FeatureScore>& scores, size_t k_anova,
                                        size_t k_rf, uint64_t seed = 0) {
    if (k_anova < 1 || k_rf < 1) throw ConfigError("selection k must be at least 1");
    if (scores.size() < k_anova || scores.size() < k_rf)
        throw DataError("fewer questions than requested top-k: have " +
                        std::to_string(scores.size()));
    SelectionResult result;
    result.k_anova = k_anova;
    result.k_rf = k_rf;
    result.seed = seed;
    for (const auto& s : scores) {
        if (s.anova_rank >= 1 && s.anova_rank <= k_anova) result.selected.insert(s.question_id);
        if (s.rf_rank >= 1 && s.rf_rank <= k_rf) result.selected.insert(s.question_id);
    }
    return result;
}

inline void save_feature_scores(const std::string& path,
                                const std::vector<FeatureScore>& scores) {
    std::string out = "question_id,anova_f,rf_importance,anova_rank,rf_rank\n";
    for (const auto& s : scores) {
        char buf[160];
        if (s.anova_infinite) {
            std::snprintf(buf, sizeof(buf), "%s,inf,%.6f,%zu,%zu\n", s.question_id.c_str(),
                          s.rf_importance, s.anova_rank, s.rf_rank);
        } else {
            std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%zu,%zu\n", s.question_id.c_str(),
                          s.anova_f, s.rf_importance, s.anova_rank, s.rf_rank);
        }
        out += buf;
    }
    atomic_write_file(path, out);
}

enum class AggregationRule { any_true, trained_classifier };

struct AggregatedPrediction {
    bool predicted = false;
    bool all_na = false;  // flagged; prediction forced to False
};

inline AggregatedPrediction aggregate_any_true(const std::vector<AnswerCell>& row) {
    AggregatedPrediction out;
    out.all_na = true;
    for (const auto& cell : row) {
        if (cell.answer != Answer::NA) out.all_na = false;
        if (cell.answer == Answer::True) out.predicted = true;
    }
    if (out.all_na) out.predicted = false;
    return out;
}

inline AggregatedPrediction aggregate_with_classifier(const std::vector<AnswerCell>& row,
                                                      const RandomForest& forest,
                                                      const Encoding& enc) {
    AggregatedPrediction out;
    out.all_na = true;
    std::vector<double> x;
    x.reserve(row.size());
    for (const auto& cell : row) {
        if (cell.answer != Answer::NA) out.all_na = false;
        x.push_back(enc(cell.answer));
    }
    out.predicted = out.all_na ? false : forest.predict(x);
    return out;
}

}  // namespace pscan::align
