#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "pscan/detect/types.hpp"
#include "pscan/text/tokenizer.hpp"
#include "pscan/util/errors.hpp"
#include "pscan/util/io.hpp"

namespace pscan::metrics {

struct ParagraphMetrics {
    detect::ParagraphRef ref;
    size_t pc = 0;          // words across the paragraph's persuasive spans
    size_t word_count = 0;  // canonical paragraph word count
    double pf = 0.0;        // pc / word_count
    bool pf_exceeds_one = false;  // overlapping spans can out-count the text

    bool operator==(const ParagraphMetrics&) const = default;
};

struct ArticleMetrics {
    std::string subject_id;
    corpus::Setting setting = corpus::Setting::en;
    size_t word_count = 0;
    size_t pc = 0;
    double pf_article = 0.0;

    bool operator==(const ArticleMetrics&) const = default;
};

// Persuasive count: words across the set's entries, by the same tokenizer
// that counts paragraphs. Permutation of entries cannot change a sum.
inline size_t pc(const detect::PersuasiveTextSet& pts) {
    size_t total = 0;
    for (const auto& e : pts.entries) total += text::word_count(e.text);
    return total;
}

inline ParagraphMetrics paragraph_metrics(const detect::PersuasiveTextSet& pts,
                                          const corpus::Paragraph& para) {
    if (para.word_count == 0)
        throw DataError("paragraph " + pts.ref.key() + " has no words; excluded upstream");
    ParagraphMetrics m;
    m.ref = pts.ref;
    m.pc = pc(pts);
    m.word_count = para.word_count;
    m.pf = static_cast<double>(m.pc) / static_cast<double>(m.word_count);
    m.pf_exceeds_one = m.pc > m.word_count;
    return m;
}

// Word-count-weighted mean of paragraph PFs. Algebraically this is
// total-pc over total-wc; both routes are computed and must agree to
// 1e-12, so a drift in either formula cannot pass silently.
inline ArticleMetrics article_metrics(const std::vector<ParagraphMetrics>& paragraphs) {
    if (paragraphs.empty()) throw DataError("article_metrics: empty paragraph list");
    ArticleMetrics a;
    a.subject_id = paragraphs.front().ref.subject_id;
    a.setting = paragraphs.front().ref.setting;
    for (const auto& p : paragraphs) {
        if (p.ref.subject_id != a.subject_id || p.ref.setting != a.setting)
            throw DataError("article_metrics: paragraphs from different articles");
        a.word_count += p.word_count;
        a.pc += p.pc;
    }
    double weighted = 0.0;
    for (const auto& p : paragraphs)
        weighted += p.pf * (static_cast<double>(p.word_count) /
                            static_cast<double>(a.word_count));
    const double direct = static_cast<double>(a.pc) / static_cast<double>(a.word_count);
    if (std::abs(weighted - direct) > 1e-12)
        throw DataError("article PF identity violated: weighted mean " +
                        std::to_string(weighted) + " vs direct " + std::to_string(direct));
    a.pf_article = weighted;
    return a;
}

struct CorpusMetrics {
    std::vector<ParagraphMetrics> paragraphs;  // canonical store order
    std::vector<ArticleMetrics> articles;      // same order, grouped
    std::vector<std::string> warnings;         // zero-word paragraphs skipped
};

// Joins the PTS store back onto the corpus it was computed from. Every
// scorable paragraph must have its row; zero-word paragraphs are skipped
// with a warning rather than scored.
inline CorpusMetrics compute_corpus_metrics(const std::vector<corpus::ArticlePair>& pairs,
                                            const std::vector<detect::PersuasiveTextSet>& rows) {
    std::map<detect::ParagraphRef, const detect::PersuasiveTextSet*> by_ref;
    for (const auto& r : rows) {
        if (!by_ref.emplace(r.ref, &r).second)
            throw DataError("duplicate PTS row for paragraph " + r.ref.key());
    }

    std::vector<const corpus::ArticlePair*> sorted;
    for (const auto& p : pairs) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(),
              [](const corpus::ArticlePair* a, const corpus::ArticlePair* b) {
                  return a->subject_id < b->subject_id;
              });

    CorpusMetrics out;
    for (const auto* pair : sorted) {
        for (corpus::Setting s : corpus::kAllSettings) {
            const corpus::Article* art = pair->find(s);
            if (!art) continue;
            std::vector<ParagraphMetrics> para_metrics;
            for (const auto& para : art->paragraphs) {
                detect::ParagraphRef ref{pair->subject_id, s, para.index};
                if (para.word_count == 0) {
                    out.warnings.push_back("skipped zero-word paragraph " + ref.key());
                    continue;
                }
                auto it = by_ref.find(ref);
                if (it == by_ref.end())
                    throw DataError("no PTS row for paragraph " + ref.key());
                para_metrics.push_back(paragraph_metrics(*it->second, para));
            }
            if (para_metrics.empty()) continue;
            out.articles.push_back(article_metrics(para_metrics));
            out.paragraphs.insert(out.paragraphs.end(), para_metrics.begin(),
                                  para_metrics.end());
        }
    }
    return out;
}

struct NpfEntry {
    std::string subject_id;
    corpus::Setting setting = corpus::Setting::en;
    double pf = 0.0;
    double npf = 0.0;

    bool operator==(const NpfEntry&) const = default;
};

struct NormalizedScores {
    std::vector<NpfEntry> first;   // aligned to the first input list
    std::vector<NpfEntry> second;  // aligned to the second
    double min_pf = 0.0;
    double max_pf = 0.0;
};

// Min-max scaling over the concatenation of both lists, mapped back onto
// each list. The extrema are shared, so scores are comparable across the
// two languages; the combined output always attains both 0 and 1.
inline NormalizedScores normalize_pf(const std::vector<ArticleMetrics>& first,
                                     const std::vector<ArticleMetrics>& second) {
    const size_t n = first.size() + second.size();
    if (n < 2) throw DataError("need at least two articles to normalize");
    double lo = first.empty() ? second.front().pf_article : first.front().pf_article;
    double hi = lo;
    for (const auto* list : {&first, &second}) {
        for (const auto& a : *list) {
            lo = std::min(lo, a.pf_article);
            hi = std::max(hi, a.pf_article);
        }
    }
    if (!(hi > lo)) throw DataError("degenerate normalization: all PF values are equal");

    NormalizedScores out;
    out.min_pf = lo;
    out.max_pf = hi;
    auto scale = [&](const std::vector<ArticleMetrics>& in, std::vector<NpfEntry>& dst) {
        for (const auto& a : in)
            dst.push_back({a.subject_id, a.setting, a.pf_article,
                           (a.pf_article - lo) / (hi - lo)});
    };
    scale(first, out.first);
    scale(second, out.second);
    return out;
}

namespace detail {

inline std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace detail

struct MetricsRow {
    ArticleMetrics article;
    double npf = 0.0;
    std::vector<std::string> flags;  // "pf_gt_1", "paragraph_pf_gt_1"
};

// One row per article, in the order given. NPF entries are joined by
// (subject, setting); an article missing from the normalization is an
// error, not a blank cell.
inline std::vector<MetricsRow> assemble_metrics_rows(const CorpusMetrics& metrics,
                                                     const NormalizedScores& scores) {
    std::map<std::pair<std::string, corpus::Setting>, double> npf_by_key;
    for (const auto* list : {&scores.first, &scores.second})
        for (const auto& e : *list) npf_by_key[{e.subject_id, e.setting}] = e.npf;

    std::vector<MetricsRow> rows;
    for (const auto& a : metrics.articles) {
        MetricsRow row;
        row.article = a;
        auto it = npf_by_key.find({a.subject_id, a.setting});
        if (it == npf_by_key.end())
            throw DataError("article " + a.subject_id + "/" +
                            std::string(corpus::to_string(a.setting)) +
                            " missing from normalization");
        row.npf = it->second;
        if (a.pf_article > 1.0) row.flags.push_back("pf_gt_1");
        for (const auto& p : metrics.paragraphs) {
            if (p.ref.subject_id == a.subject_id && p.ref.setting == a.setting &&
                p.pf_exceeds_one) {
                row.flags.push_back("paragraph_pf_gt_1");
                break;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void write_metrics_csv(const std::filesystem::path& path,
                              const std::vector<MetricsRow>& rows) {
    std::string body = "subject_id,setting,wc,pc,pf,npf,flags\n";
    for (const auto& r : rows) {
        body += r.article.subject_id;
        body += ',';
        body += std::string(corpus::to_string(r.article.setting));
        body += ',';
        body += std::to_string(r.article.word_count);
        body += ',';
        body += std::to_string(r.article.pc);
        body += ',';
        body += detail::fixed6(r.article.pf_article);
        body += ',';
        body += detail::fixed6(r.npf);
        body += ',';
        for (size_t i = 0; i < r.flags.size(); ++i) {
            if (i) body += ';';
            body += r.flags[i];
        }
        body += '\n';
    }
    atomic_write_file(path, body);
}

}  // namespace pscan::metrics
