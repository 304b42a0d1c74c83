#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pscan/align/matrix.hpp"
#include "pscan/align/parse.hpp"
#include "pscan/util/errors.hpp"
#include "pscan/util/io.hpp"
#include "pscan/util/strings.hpp"
#include "pscan/util/utf8.hpp"

namespace pscan::align {

// Numeric encoding of ternary answers for feature math.
struct Encoding {
    double true_value = 1.0;
    double false_value = 0.0;
    double na_value = 0.0;

    double operator()(Answer a) const {
        switch (a) {
            case Answer::True: return true_value;
            case Answer::False: return false_value;
            case Answer::NA: return na_value;
        }
        return na_value;
    }

    static Encoding binary() { return {1.0, 0.0, 0.0}; }
    static Encoding signed_ternary() { return {1.0, -1.0, 0.0}; }
};

struct F1Result {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool degenerate = false;  // some denominator was zero
    size_t true_positives = 0;
    size_t false_positives = 0;
    size_t false_negatives = 0;
};

inline F1Result binary_f1(const std::vector<bool>& predictions, const std::vector<bool>& gold) {
    if (predictions.size() != gold.size())
        throw DataError("prediction and gold lengths differ: " +
                        std::to_string(predictions.size()) + " vs " +
                        std::to_string(gold.size()));
    F1Result r;
    for (size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i] && gold[i]) r.true_positives++;
        else if (predictions[i] && !gold[i]) r.false_positives++;
        else if (!predictions[i] && gold[i]) r.false_negatives++;
    }
    size_t pred_pos = r.true_positives + r.false_positives;
    size_t gold_pos = r.true_positives + r.false_negatives;
    if (pred_pos == 0 || gold_pos == 0) r.degenerate = true;
    r.precision = pred_pos ? static_cast<double>(r.true_positives) / pred_pos : 0.0;
    r.recall = gold_pos ? static_cast<double>(r.true_positives) / gold_pos : 0.0;
    // Counts form of 2PR/(P+R): one rounding, so exact whenever the true
    // value has a short decimal expansion.
    const double denom = 2.0 * r.true_positives + r.false_positives + r.false_negatives;
    r.f1 = denom > 0.0 ? 2.0 * r.true_positives / denom : 0.0;
    return r;
}

struct SweepRow {
    int threshold = 0;
    double f1 = 0.0;
    size_t true_count = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    int best_threshold = 0;  // highest F1, ties to the smallest threshold
    double best_f1 = 0.0;
};

// Prediction rule: positive iff the row's maximum technique confidence
// reaches the threshold.
inline SweepResult threshold_sweep(const std::vector<std::pair<int, bool>>& max_conf_and_gold,
                                   const std::vector<int>& thresholds) {
    std::vector<bool> gold;
    gold.reserve(max_conf_and_gold.size());
    for (const auto& [conf, g] : max_conf_and_gold) {
        if (conf < 0 || conf > 100)
            throw DataError("confidence " + std::to_string(conf) + " outside 0-100");
        gold.push_back(g);
    }
    SweepResult result;
    bool first = true;
    for (int x : thresholds) {
        std::vector<bool> pred;
        pred.reserve(max_conf_and_gold.size());
        size_t true_count = 0;
        for (const auto& [conf, g] : max_conf_and_gold) {
            bool p = conf >= x;
            true_count += p;
            pred.push_back(p);
        }
        auto f1 = binary_f1(pred, gold);
        result.rows.push_back({x, f1.f1, true_count});
        if (first || f1.f1 > result.best_f1 ||
            (f1.f1 == result.best_f1 && x < result.best_threshold)) {
            result.best_f1 = f1.f1;
            result.best_threshold = x;
            first = false;
        }
    }
    return result;
}

struct BaselineParse {
    int max_confidence = 0;     // highest confidence over predicted techniques
    size_t technique_pieces = 0;
    size_t dropped_pieces = 0;  // pieces with no parsable confidence
};

// Semicolon-separated technique predictions, e.g.
// "Loaded_Language (conf:70); Doubt (conf:55)". The None label is the
// explicit no-persuasion prediction, so it contributes no confidence.
// Never throws: unreadable pieces are counted and skipped.
inline BaselineParse parse_baseline_response(const std::string& response) {
    BaselineParse out;
    const std::string lower = utf8::lowercase(response);
    size_t pos = 0;
    while (pos <= lower.size()) {
        size_t semi = lower.find(';', pos);
        size_t end = semi == std::string::npos ? lower.size() : semi;
        std::string piece = trim(lower.substr(pos, end - pos));
        if (!piece.empty()) {
            std::string name = trim(piece.substr(0, piece.find('(')));
            while (!name.empty() && (name.back() == '.' || name.back() == '!')) name.pop_back();
            if (name != "none") {
                auto conf = detail::find_confidence(lower, pos, end);
                if (conf) {
                    out.max_confidence = std::max(out.max_confidence, *conf);
                    out.technique_pieces += 1;
                } else {
                    out.dropped_pieces += 1;
                }
            }
        }
        if (semi == std::string::npos) break;
        pos = semi + 1;
    }
    return out;
}

// Prediction dump: tab-separated, header "max_confidence\tgold", one row
// per context with the row's maximum technique confidence (0-100) and the
// binary gold label as 0/1. Blank lines and '#' comments are skipped.
inline std::vector<std::pair<int, bool>> load_prediction_dump(const std::string& path) {
    const std::string body = read_file(path);
    std::vector<std::pair<int, bool>> out;
    bool header_seen = false;
    size_t pos = 0, line_no = 0;
    while (pos < body.size()) {
        size_t nl = body.find('\n', pos);
        std::string line = body.substr(pos, nl == std::string::npos ? nl : nl - pos);
        pos = nl == std::string::npos ? body.size() : nl + 1;
        ++line_no;
        std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        if (!header_seen) {
            if (line != "max_confidence\tgold")
                throw DataError(path + ":" + std::to_string(line_no) +
                                ": expected header 'max_confidence\\tgold'");
            header_seen = true;
            continue;
        }
        size_t tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": expected 2 tab-separated columns");
        const std::string conf_s = line.substr(0, tab);
        const std::string gold_s = line.substr(tab + 1);
        if (conf_s.empty() || conf_s.find_first_not_of("0123456789") != std::string::npos)
            throw DataError(path + ":" + std::to_string(line_no) + ": bad confidence '" +
                            conf_s + "'");
        int conf = std::stoi(conf_s);
        if (conf > 100)
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": confidence outside 0-100");
        if (gold_s != "0" && gold_s != "1")
            throw DataError(path + ":" + std::to_string(line_no) + ": gold must be 0 or 1");
        out.emplace_back(conf, gold_s == "1");
    }
    if (!header_seen) throw DataError(path + ": empty prediction dump");
    if (out.empty()) throw DataError(path + ": prediction dump has no rows");
    return out;
}

inline constexpr double kInfiniteF = std::numeric_limits<double>::infinity();

struct AnovaScore {
    std::string question_id;
    double f = 0.0;
    bool infinite = false;  // zero within-group variance sentinel
};

// One-way two-group F statistic of each encoded answer column against the
// binary gold label.
inline std::vector<AnovaScore> anova_f_scores(const AnswerMatrix& m, const Encoding& enc) {
    m.validate();
    size_t n_true = 0;
    for (bool g : m.gold) n_true += g;
    size_t n_false = m.rows() - n_true;
    if (n_true == 0 || n_false == 0)
        throw DataError("gold labels are single-class; F statistic undefined");

    std::vector<AnovaScore> out;
    out.reserve(m.cols());
    for (size_t c = 0; c < m.cols(); ++c) {
        double sum[2] = {0.0, 0.0};
        for (size_t r = 0; r < m.rows(); ++r) sum[m.gold[r] ? 1 : 0] += enc(m.cells[r][c].answer);
        const double n0 = static_cast<double>(n_false), n1 = static_cast<double>(n_true);
        const double m0 = sum[0] / n0, m1 = sum[1] / n1;
        const double grand = (sum[0] + sum[1]) / (n0 + n1);
        double ssw = 0.0;
        for (size_t r = 0; r < m.rows(); ++r) {
            double d = enc(m.cells[r][c].answer) - (m.gold[r] ? m1 : m0);
            ssw += d * d;
        }
        const double ssb = n0 * (m0 - grand) * (m0 - grand) + n1 * (m1 - grand) * (m1 - grand);
        const double df2 = n0 + n1 - 2.0;
        AnovaScore score;
        score.question_id = m.question_ids[c];
        if (ssw <= 0.0 || df2 <= 0.0) {
            if (ssb <= 0.0) {
                score.f = 0.0;  // constant feature: no separation at all
            } else {
                score.f = kInfiniteF;
                score.infinite = true;
            }
        } else {
            score.f = ssb / (ssw / df2);
        }
        out.push_back(std::move(score));
    }
    return out;
}

}  // namespace pscan::align
