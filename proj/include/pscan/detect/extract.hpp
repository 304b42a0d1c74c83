#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "pscan/align/select.hpp"
#include "pscan/detect/types.hpp"
#include "pscan/gateway/prompt.hpp"
#include "pscan/gateway/provider.hpp"
#include "pscan/hlq/types.hpp"
#include "pscan/util/strings.hpp"
#include "pscan/util/utf8.hpp"

namespace pscan::detect {

namespace detail {

inline const char* extract_template_for(corpus::Language lang) {
    return lang == corpus::Language::ru ? "extract_ru" : "extract_en";
}

// Whole-response (or whole-piece) ways of saying "nothing here". Compared
// against the normalized piece with trailing sentence punctuation removed.
inline bool is_refusal_piece(std::string_view normalized) {
    std::string s(normalized);
    while (!s.empty() && (s.back() == '.' || s.back() == '!')) s.pop_back();
    s = trim(s);
    static const std::string_view kRefusals[] = {
        "none",          "none found",        "no instances", "no instances found",
        "nothing found", "not found",         "n/a",          "na",
        "нет",           "ничего не найдено", "не найдено",   "нет примеров",
    };
    for (auto r : kRefusals)
        if (s == r) return true;
    return false;
}

}  // namespace detail

struct ExtractionResult {
    std::vector<ExtractionSpan> spans;
    bool empty_response = false;  // nothing usable parsed out of the response
};

// Splits an extraction response on semicolons into cleaned spans. Spans not
// occurring verbatim in the paragraph (case-insensitive) are kept but marked
// non-verbatim. Refusal phrases and empty pieces parse to nothing; a
// response yielding zero spans is flagged, never an error.
inline ExtractionResult parse_extract_response(const std::string& response,
                                               const std::string& question_id,
                                               const std::string& paragraph_text) {
    ExtractionResult out;
    const std::string para_lower = utf8::lowercase(paragraph_text);
    for (const auto& piece : split(response, ';')) {
        ExtractionSpan span;
        span.text = clean_span(piece);
        span.normalized = normalize_span(span.text);
        if (span.normalized.empty() || detail::is_refusal_piece(span.normalized)) continue;
        span.question_id = question_id;
        span.verbatim = para_lower.find(span.normalized) != std::string::npos;
        out.spans.push_back(std::move(span));
    }
    out.empty_response = out.spans.empty();
    return out;
}

inline gateway::ChatPrompt render_extract_prompt(const gateway::PromptCatalog& catalog,
                                                 const hlq::HLQ& question,
                                                 const corpus::Paragraph& para,
                                                 corpus::Language lang) {
    const std::string& qtext =
        (lang == corpus::Language::ru && !question.text_ru.empty()) ? question.text_ru
                                                                    : question.text_en;
    return gateway::render_prompt(catalog, detail::extract_template_for(lang),
                                  {{"question", qtext}, {"text", para.text}});
}

// One prompt per (paragraph, question) pair, issued only for True cells.
inline ExtractionResult extract(gateway::Gateway& gw, const gateway::PromptCatalog& catalog,
                                const ParagraphRef& ref, const corpus::Paragraph& para,
                                const hlq::HLQ& question, const align::AnswerCell& cell,
                                const DetectConfig& cfg = {}) {
    if (!cell_counts_as_true(cell, cfg))
        throw ConfigError("extraction requires a True cell for " + question.id);
    auto prompt =
        render_extract_prompt(catalog, question, para, corpus::text_language(ref.setting));
    return parse_extract_response(gw.complete(prompt).response_text, question.id, para.text);
}

// Collapses spans from all questions of one paragraph into its persuasive
// text set. Spans are first put in canonical question order, so the result
// does not depend on the order questions were processed in; within one
// question the response order is kept. Equal normalized texts merge into
// one entry whose contributor list is the sorted union.
inline PersuasiveTextSet collapse_to_pts(const ParagraphRef& ref,
                                         std::vector<ExtractionSpan> spans,
                                         const DetectConfig& cfg = {}) {
    std::stable_sort(spans.begin(), spans.end(),
                     [](const ExtractionSpan& a, const ExtractionSpan& b) {
                         return align::question_id_less(a.question_id, b.question_id);
                     });

    PersuasiveTextSet pts;
    pts.ref = ref;
    for (const auto& span : spans) {
        auto it = std::find_if(pts.entries.begin(), pts.entries.end(),
                               [&](const PtsEntry& e) { return e.text == span.normalized; });
        if (it == pts.entries.end()) {
            pts.entries.push_back({span.normalized, {span.question_id}, span.verbatim});
        } else if (std::find(it->question_ids.begin(), it->question_ids.end(),
                             span.question_id) == it->question_ids.end()) {
            it->question_ids.push_back(span.question_id);
        }
    }
    for (auto& e : pts.entries)
        std::sort(e.question_ids.begin(), e.question_ids.end(), align::question_id_less);

    if (cfg.containment_collapse && pts.entries.size() > 1) {
        // Longest-first scan; an entry strictly contained in a kept entry
        // folds its contributors into that entry. First-occurrence order of
        // the survivors is restored afterwards.
        std::vector<size_t> order(pts.entries.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return pts.entries[a].text.size() > pts.entries[b].text.size();
        });
        std::vector<bool> kept(pts.entries.size(), false);
        std::vector<size_t> kept_order;
        for (size_t idx : order) {
            size_t host = pts.entries.size();
            for (size_t k : kept_order) {
                if (pts.entries[k].text.find(pts.entries[idx].text) != std::string::npos) {
                    host = k;
                    break;
                }
            }
            if (host == pts.entries.size()) {
                kept[idx] = true;
                kept_order.push_back(idx);
            } else {
                auto& dst = pts.entries[host].question_ids;
                for (const auto& q : pts.entries[idx].question_ids)
                    if (std::find(dst.begin(), dst.end(), q) == dst.end()) dst.push_back(q);
            }
        }
        std::vector<PtsEntry> survivors;
        for (size_t i = 0; i < pts.entries.size(); ++i) {
            if (!kept[i]) continue;
            auto e = pts.entries[i];
            std::sort(e.question_ids.begin(), e.question_ids.end(), align::question_id_less);
            survivors.push_back(std::move(e));
        }
        pts.entries = std::move(survivors);
    }
    return pts;
}

}  // namespace pscan::detect
