#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pscan/corpus/types.hpp"
#include "pscan/metrics/metrics.hpp"
#include "pscan/util/errors.hpp"
#include "pscan/util/io.hpp"
#include "pscan/util/strings.hpp"

namespace pscan::analysis {

struct TopicMapping {
    std::string subject_id;
    std::string topic_id;
    std::string label;

    bool operator==(const TopicMapping&) const = default;
};

// Tab-separated subject-to-topic table. Header row is mandatory, '#' lines
// are comments, every data row needs exactly three non-empty columns, and
// a (subject, topic) pair may appear once. A subject may span several rows.
inline std::vector<TopicMapping> load_topic_map(const std::string& path) {
    const std::string body = read_file(path);
    std::vector<TopicMapping> out;
    std::set<std::pair<std::string, std::string>> seen;
    size_t line_no = 0;
    bool header_seen = false;
    size_t pos = 0;
    while (pos <= body.size()) {
        size_t nl = body.find('\n', pos);
        std::string line = body.substr(pos, nl == std::string::npos ? nl : nl - pos);
        pos = nl == std::string::npos ? body.size() + 1 : nl + 1;
        ++line_no;
        if (line.empty() && pos > body.size()) break;
        std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;

        std::vector<std::string> cols;
        size_t c = 0;
        while (true) {
            size_t tab = line.find('\t', c);
            cols.push_back(line.substr(c, tab == std::string::npos ? tab : tab - c));
            if (tab == std::string::npos) break;
            c = tab + 1;
        }
        if (!header_seen) {
            if (cols != std::vector<std::string>{"subject_id", "topic_id", "label"})
                throw DataError(path + ":" + std::to_string(line_no) +
                                ": expected header 'subject_id\\ttopic_id\\tlabel'");
            header_seen = true;
            continue;
        }
        if (cols.size() != 3)
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": expected 3 tab-separated columns, got " +
                            std::to_string(cols.size()));
        TopicMapping m{trim(cols[0]), trim(cols[1]), trim(cols[2])};
        if (m.subject_id.empty() || m.topic_id.empty() || m.label.empty())
            throw DataError(path + ":" + std::to_string(line_no) + ": empty column");
        if (!seen.insert({m.subject_id, m.topic_id}).second)
            throw DataError(path + ":" + std::to_string(line_no) + ": duplicate mapping " +
                            m.subject_id + " -> " + m.topic_id);
        out.push_back(std::move(m));
    }
    if (!header_seen) throw DataError(path + ": empty topic map");
    return out;
}

struct TopicAggregate {
    std::string topic_id;
    std::string label;
    size_t subject_count = 0;
    double mean_npf_en = -1.0;  // -1 marks "no entries in this language"
    double mean_npf_ru = -1.0;
};

struct TopicAggregation {
    std::vector<TopicAggregate> aggregates;  // combined mean desc, topic id asc on ties
    std::vector<std::string> unmapped;       // table subjects with no mapping, sorted unique
};

// Averages normalized scores per topic and language. A subject mapped to
// several topics contributes to each. Entry language follows the text
// language of its setting, so translated settings pool with their output
// language. Topics below min_count distinct subjects are dropped.
inline TopicAggregation topic_aggregate(const std::vector<TopicMapping>& mapping,
                                        const std::vector<metrics::NpfEntry>& entries,
                                        size_t min_count = 50) {
    if (min_count < 1) throw ConfigError("min_count must be at least 1");

    std::map<std::string, std::vector<const TopicMapping*>> topics_of;
    for (const auto& m : mapping) topics_of[m.subject_id].push_back(&m);

    struct Acc {
        std::string label;
        std::set<std::string> subjects;
        double en_sum = 0.0;
        size_t en_n = 0;
        double ru_sum = 0.0;
        size_t ru_n = 0;
    };
    std::map<std::string, Acc> acc;
    std::set<std::string> unmapped;
    for (const auto& e : entries) {
        auto it = topics_of.find(e.subject_id);
        if (it == topics_of.end()) {
            unmapped.insert(e.subject_id);
            continue;
        }
        for (const auto* m : it->second) {
            auto& a = acc[m->topic_id];
            if (a.label.empty()) a.label = m->label;
            a.subjects.insert(e.subject_id);
            if (corpus::text_language(e.setting) == corpus::Language::en) {
                a.en_sum += e.npf;
                ++a.en_n;
            } else {
                a.ru_sum += e.npf;
                ++a.ru_n;
            }
        }
    }

    TopicAggregation out;
    out.unmapped.assign(unmapped.begin(), unmapped.end());
    for (const auto& [topic_id, a] : acc) {
        if (a.subjects.size() < min_count) continue;
        TopicAggregate t;
        t.topic_id = topic_id;
        t.label = a.label;
        t.subject_count = a.subjects.size();
        if (a.en_n > 0) t.mean_npf_en = a.en_sum / static_cast<double>(a.en_n);
        if (a.ru_n > 0) t.mean_npf_ru = a.ru_sum / static_cast<double>(a.ru_n);
        out.aggregates.push_back(std::move(t));
    }
    // Canonical order: pooled mean over every member entry, descending.
    std::map<std::string, double> combined;
    for (const auto& [topic_id, a] : acc) {
        const size_t n = a.en_n + a.ru_n;
        combined[topic_id] = n == 0 ? 0.0 : (a.en_sum + a.ru_sum) / static_cast<double>(n);
    }
    std::sort(out.aggregates.begin(), out.aggregates.end(),
              [&](const TopicAggregate& x, const TopicAggregate& y) {
                  double cx = combined[x.topic_id], cy = combined[y.topic_id];
                  if (cx != cy) return cx > cy;
                  return x.topic_id < y.topic_id;
              });
    return out;
}

}  // namespace pscan::analysis
