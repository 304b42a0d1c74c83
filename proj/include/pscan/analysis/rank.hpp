#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pscan/corpus/types.hpp"
#include "pscan/metrics/metrics.hpp"
#include "pscan/util/errors.hpp"

namespace pscan::analysis {

enum class ScoreKind { pf, npf, pc, length };

inline std::string to_string(ScoreKind k) {
    switch (k) {
        case ScoreKind::pf: return "pf";
        case ScoreKind::npf: return "npf";
        case ScoreKind::pc: return "pc";
        case ScoreKind::length: return "length";
    }
    throw ConfigError("unknown score kind");
}

inline ScoreKind parse_score_kind(const std::string& s) {
    if (s == "pf") return ScoreKind::pf;
    if (s == "npf") return ScoreKind::npf;
    if (s == "pc") return ScoreKind::pc;
    if (s == "length") return ScoreKind::length;
    throw ConfigError("unknown score kind '" + s + "' (expected pf, npf, pc or length)");
}

struct RankEntry {
    std::string subject_id;
    double score = 0.0;

    bool operator==(const RankEntry&) const = default;
};

struct Ranking {
    corpus::Setting setting = corpus::Setting::en;
    ScoreKind kind = ScoreKind::pf;
    std::vector<RankEntry> entries;  // score descending, subject id ascending on ties
};

namespace detail {

inline double score_of(const metrics::MetricsRow& r, ScoreKind k) {
    switch (k) {
        case ScoreKind::pf: return r.article.pf_article;
        case ScoreKind::npf: return r.npf;
        case ScoreKind::pc: return static_cast<double>(r.article.pc);
        case ScoreKind::length: return static_cast<double>(r.article.word_count);
    }
    throw ConfigError("unknown score kind");
}

}  // namespace detail

// Ranks one setting's articles by the chosen score. top_length_fraction
// restricts to the longest articles first: the cutoff is the k-th largest
// word count with k = ceil(fraction * n), and ties at the cutoff are kept,
// so a requested fraction never empties the list on its own. Ties in the
// ranking score break by subject id ascending, making the order total.
inline Ranking rank_by_score(const std::vector<metrics::MetricsRow>& rows,
                             corpus::Setting setting, ScoreKind kind,
                             double top_length_fraction = 1.0) {
    if (!(top_length_fraction > 0.0) || top_length_fraction > 1.0)
        throw ConfigError("top_length_fraction must be in (0, 1]");

    std::vector<const metrics::MetricsRow*> pool;
    for (const auto& r : rows)
        if (r.article.setting == setting) pool.push_back(&r);
    if (pool.empty())
        throw DataError("no articles for setting " + std::string(corpus::to_string(setting)));

    std::vector<size_t> counts;
    counts.reserve(pool.size());
    for (const auto* r : pool) counts.push_back(r->article.word_count);
    std::sort(counts.begin(), counts.end(), std::greater<>());
    const size_t k = static_cast<size_t>(
        std::ceil(top_length_fraction * static_cast<double>(counts.size())));
    const size_t threshold = counts[k - 1];

    Ranking out;
    out.setting = setting;
    out.kind = kind;
    for (const auto* r : pool) {
        if (r->article.word_count < threshold) continue;
        out.entries.push_back({r->article.subject_id, detail::score_of(*r, kind)});
    }
    std::sort(out.entries.begin(), out.entries.end(), [](const RankEntry& a, const RankEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.subject_id < b.subject_id;
    });
    return out;
}

inline std::vector<std::string> ranked_ids(const Ranking& r) {
    std::vector<std::string> ids;
    ids.reserve(r.entries.size());
    for (const auto& e : r.entries) ids.push_back(e.subject_id);
    return ids;
}

}  // namespace pscan::analysis
