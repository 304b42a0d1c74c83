#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pscan/corpus/types.hpp"
#include "pscan/metrics/metrics.hpp"
#include "pscan/util/errors.hpp"

namespace pscan::analysis {

struct DisagreementRow {
    std::string subject_id;
    double pf_ru = 0.0;
    double pf_en = 0.0;
    double delta = 0.0;  // pf_ru - pf_en; positive means more persuasive in Russian

    bool operator==(const DisagreementRow&) const = default;
};

struct DisagreementReport {
    std::vector<DisagreementRow> rows;  // |delta| descending, subject id asc on ties
    std::vector<std::string> warnings;
};

// Pairs each subject's original-language articles and reports the gap.
// Translated settings carry no independent signal here and are ignored.
// A subject with only one side is skipped with a warning, not dropped
// silently and not an error: partial corpora are normal mid-run.
inline DisagreementReport disagreement(const std::vector<metrics::ArticleMetrics>& articles) {
    struct Pair {
        std::optional<double> ru, en;
    };
    std::map<std::string, Pair> by_subject;
    for (const auto& a : articles) {
        if (a.setting == corpus::Setting::ru) {
            auto& p = by_subject[a.subject_id];
            if (p.ru) throw DataError("duplicate ru article for subject " + a.subject_id);
            p.ru = a.pf_article;
        } else if (a.setting == corpus::Setting::en) {
            auto& p = by_subject[a.subject_id];
            if (p.en) throw DataError("duplicate en article for subject " + a.subject_id);
            p.en = a.pf_article;
        }
    }

    DisagreementReport out;
    for (const auto& [subject, p] : by_subject) {
        if (p.ru && p.en) {
            out.rows.push_back({subject, *p.ru, *p.en, *p.ru - *p.en});
        } else {
            out.warnings.push_back("subject " + subject + " lacks its " +
                                   (p.ru ? "en" : "ru") + " article; skipped");
        }
    }
    std::sort(out.rows.begin(), out.rows.end(),
              [](const DisagreementRow& a, const DisagreementRow& b) {
                  const double da = std::abs(a.delta), db = std::abs(b.delta);
                  if (da != db) return da > db;
                  return a.subject_id < b.subject_id;
              });
    return out;
}

}  // namespace pscan::analysis
