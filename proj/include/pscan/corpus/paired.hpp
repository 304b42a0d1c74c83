#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pscan/corpus/types.hpp"
#include "pscan/text/tokenizer.hpp"
#include "pscan/util/errors.hpp"
#include "pscan/util/io.hpp"

namespace pscan::corpus {

struct PairedCorpus {
    std::vector<ArticlePair> pairs;
    std::vector<std::string> warnings;  // orphan subjects, one message each
};

// One UTF-8 JSON record per line, one record per article:
//   {"subject_id": ..., "title": ..., "setting": "en|ru|en2ru|ru2en",
//    "paragraphs": ["...", ...]}
// Pairs are assembled by subject_id in first-appearance order; subjects
// missing either base language are excluded with a warning.
inline PairedCorpus load_paired_corpus(const std::string& path) {
    auto lines = read_lines(path);

    std::vector<std::string> subject_order;
    std::map<std::string, ArticlePair> by_subject;

    for (size_t li = 0; li < lines.size(); ++li) {
        if (trim_view(lines[li]).empty()) continue;
        const std::string lineno = std::to_string(li + 1);
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(lines[li]);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path + ": invalid JSON at line " + lineno + ": " + e.what());
        }
        if (!rec.is_object() || !rec.contains("subject_id") || !rec.contains("title") ||
            !rec.contains("setting") || !rec.contains("paragraphs"))
            throw DataError(path + ": missing required field at line " + lineno);

        Article art;
        art.subject_id = rec.at("subject_id").get<std::string>();
        art.title = rec.at("title").get<std::string>();
        art.setting = parse_setting(rec.at("setting").get<std::string>());
        const auto& paras = rec.at("paragraphs");
        if (!paras.is_array() || paras.empty())
            throw DataError(path + ": article without paragraphs at line " + lineno);
        size_t index = 0;
        for (const auto& p : paras) {
            Paragraph para;
            para.index = index++;
            para.text = p.get<std::string>();
            para.word_count = text::word_count(para.text);
            art.paragraphs.push_back(std::move(para));
        }

        auto [it, inserted] = by_subject.try_emplace(art.subject_id);
        if (inserted) {
            it->second.subject_id = art.subject_id;
            subject_order.push_back(art.subject_id);
        }
        auto setting = art.setting;
        if (!it->second.articles.emplace(setting, std::move(art)).second)
            throw DataError(path + ": duplicate article for subject '" + it->first +
                            "' setting '" + std::string(to_string(setting)) + "' at line " +
                            lineno);
    }

    PairedCorpus out;
    for (const auto& sid : subject_order) {
        auto& pair = by_subject.at(sid);
        bool has_en = pair.articles.count(Setting::en) > 0;
        bool has_ru = pair.articles.count(Setting::ru) > 0;
        if (!has_en || !has_ru) {
            out.warnings.push_back("subject '" + sid + "' excluded: missing " +
                                   (has_en ? "ru" : (has_ru ? "en" : "en and ru")) +
                                   " counterpart");
            continue;
        }
        out.pairs.push_back(std::move(pair));
    }
    return out;
}

inline void save_paired_corpus(const std::string& path, const std::vector<ArticlePair>& pairs) {
    std::string body;
    for (const auto& pair : pairs) {
        for (Setting s : kAllSettings) {
            const Article* art = pair.find(s);
            if (!art) continue;
            nlohmann::json rec;
            rec["subject_id"] = art->subject_id;
            rec["title"] = art->title;
            rec["setting"] = std::string(to_string(s));
            auto& paras = rec["paragraphs"] = nlohmann::json::array();
            for (const auto& p : art->paragraphs) paras.push_back(p.text);
            body += rec.dump();
            body += '\n';
        }
    }
    atomic_write_file(path, body);
}

// Keeps articles whose word count strictly exceeds the (1 - top_fraction)
// nearest-rank quantile of the list's word counts. Input order is preserved.
inline std::vector<Article> length_percentile_filter(const std::vector<Article>& articles,
                                                     double top_fraction) {
    if (!(top_fraction > 0.0) || top_fraction > 1.0)
        throw ConfigError("top_fraction must be in (0, 1]");
    if (articles.empty()) throw DataError("length_percentile_filter: empty article list");

    std::vector<size_t> counts;
    counts.reserve(articles.size());
    for (const auto& a : articles) counts.push_back(a.word_count());
    std::sort(counts.begin(), counts.end());

    const double q = 1.0 - top_fraction;
    const size_t rank = static_cast<size_t>(std::ceil(q * static_cast<double>(counts.size())));
    std::vector<Article> out;
    if (rank == 0) return articles;
    const size_t threshold = counts[rank - 1];
    for (const auto& a : articles) {
        if (a.word_count() > threshold) out.push_back(a);
    }
    return out;
}

}  // namespace pscan::corpus
