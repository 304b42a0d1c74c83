#pragma once

#include <map>
#include <string>
#include <vector>

#include "pscan/analysis/disagreement.hpp"
#include "pscan/analysis/rank.hpp"
#include "pscan/analysis/topics.hpp"
#include "pscan/corpus/types.hpp"
#include "pscan/metrics/metrics.hpp"
#include "pscan/util/io.hpp"

namespace pscan::analysis {

enum class ReportFormat { csv, structured_text };

// All emitters write through atomic_write_file, so a report is either the
// complete new content or the untouched old file. Scores use fixed six
// decimals to keep re-runs byte-identical.

inline void emit_ranking(const std::string& path, const Ranking& r, ReportFormat format) {
    std::string body;
    if (format == ReportFormat::csv) {
        body = "rank,subject_id,score\n";
        for (size_t i = 0; i < r.entries.size(); ++i)
            body += std::to_string(i + 1) + "," + r.entries[i].subject_id + "," +
                    metrics::detail::fixed6(r.entries[i].score) + "\n";
    } else {
        body = "# ranking setting=" + std::string(corpus::to_string(r.setting)) +
               " kind=" + to_string(r.kind) + "\n";
        for (size_t i = 0; i < r.entries.size(); ++i)
            body += std::to_string(i + 1) + "\t" + r.entries[i].subject_id + "\t" +
                    metrics::detail::fixed6(r.entries[i].score) + "\n";
    }
    atomic_write_file(path, body);
}

inline void emit_topics(const std::string& path, const std::vector<TopicAggregate>& topics,
                        ReportFormat format) {
    const bool csv = format == ReportFormat::csv;
    const char sep = csv ? ',' : '\t';
    std::string body = csv ? "topic_id,label,subjects,npf_en,npf_ru\n"
                           : "# topics\ntopic_id\tlabel\tsubjects\tnpf_en\tnpf_ru\n";
    auto mean_field = [](double v) { return v < 0.0 ? std::string() : metrics::detail::fixed6(v); };
    for (const auto& t : topics) {
        body += t.topic_id + sep + t.label + sep + std::to_string(t.subject_count) + sep +
                mean_field(t.mean_npf_en) + sep + mean_field(t.mean_npf_ru) + "\n";
    }
    atomic_write_file(path, body);
}

// The scatter section lists each report subject's normalized scores for
// the two original languages side by side; subjects missing either score
// are left out of that section only.
inline void emit_disagreement(const std::string& path, const DisagreementReport& report,
                              ReportFormat format,
                              const std::vector<metrics::NpfEntry>* scatter = nullptr) {
    std::string body;
    if (format == ReportFormat::csv) {
        body = "subject_id,pf_ru,pf_en,delta\n";
        for (const auto& row : report.rows)
            body += row.subject_id + "," + metrics::detail::fixed6(row.pf_ru) + "," +
                    metrics::detail::fixed6(row.pf_en) + "," +
                    metrics::detail::fixed6(row.delta) + "\n";
        atomic_write_file(path, body);
        return;
    }

    body = "# disagreement\nsubject_id\tpf_ru\tpf_en\tdelta\n";
    for (const auto& row : report.rows)
        body += row.subject_id + "\t" + metrics::detail::fixed6(row.pf_ru) + "\t" +
                metrics::detail::fixed6(row.pf_en) + "\t" + metrics::detail::fixed6(row.delta) +
                "\n";
    if (scatter) {
        struct Point {
            double ru = -1.0, en = -1.0;
            bool has_ru = false, has_en = false;
        };
        std::map<std::string, Point> points;
        for (const auto& e : *scatter) {
            auto& p = points[e.subject_id];
            if (corpus::text_language(e.setting) == corpus::Language::ru) {
                p.ru = e.npf;
                p.has_ru = true;
            } else {
                p.en = e.npf;
                p.has_en = true;
            }
        }
        body += "\n# scatter npf_ru vs npf_en\n";
        for (const auto& row : report.rows) {
            auto it = points.find(row.subject_id);
            if (it == points.end() || !it->second.has_ru || !it->second.has_en) continue;
            body += row.subject_id + "\t" + metrics::detail::fixed6(it->second.ru) + "\t" +
                    metrics::detail::fixed6(it->second.en) + "\n";
        }
    }
    atomic_write_file(path, body);
}

}  // namespace pscan::analysis
