#pragma once

#include <string>
#include <vector>

#include "pscan/align/answer.hpp"
#include "pscan/align/parse.hpp"
#include "pscan/detect/types.hpp"
#include "pscan/gateway/prompt.hpp"
#include "pscan/gateway/provider.hpp"
#include "pscan/hlq/types.hpp"

namespace pscan::detect {

namespace detail {

inline const char* identify_template_for(corpus::Language lang) {
    return lang == corpus::Language::ru ? "identify_ru" : "identify_en";
}

// Appended to the paragraph on the one retry after a response in which no
// question label could be located. A stricter format reminder, and a
// distinct prompt, so the retry is not served the cached failure.
inline const char* retry_suffix(corpus::Language lang) {
    return lang == corpus::Language::ru
               ? "\n\nОтветьте на каждый вопрос строкой вида 'Qk: True', 'Qk: False' или "
                 "'Qk: N/A', при возможности с уверенностью '(conf:NN)'."
               : "\n\nAnswer every question on its own as 'Qk: True', 'Qk: False' or "
                 "'Qk: N/A', with confidence as '(conf:NN)' where possible.";
}

inline std::vector<std::string> ids_of(const std::vector<hlq::HLQ>& hlqs) {
    std::vector<std::string> ids;
    ids.reserve(hlqs.size());
    for (const auto& q : hlqs) ids.push_back(q.id);
    return ids;
}

// True when nothing in the response could be tied to any question: every
// cell came back not_found. Partial parses (some labels present) stand.
inline bool total_parse_failure(const std::vector<align::ParsedAnswer>& parsed) {
    for (const auto& pa : parsed)
        if (pa.cell.status != align::CellStatus::not_found) return false;
    return !parsed.empty();
}

inline void fill_cells(IdentifyResult& r, const std::vector<align::ParsedAnswer>& parsed) {
    r.cells.clear();
    for (const auto& pa : parsed) r.cells[pa.question_id] = pa.cell;
}

inline void fill_all_na(IdentifyResult& r, const std::vector<std::string>& ids) {
    r.cells.clear();
    for (const auto& id : ids)
        r.cells[id] = {align::Answer::NA, std::nullopt, align::CellStatus::not_found};
}

}  // namespace detail

inline gateway::ChatPrompt render_identify_prompt(const gateway::PromptCatalog& catalog,
                                                  const std::vector<hlq::HLQ>& hlqs,
                                                  const corpus::Paragraph& para,
                                                  corpus::Language lang, bool retry = false) {
    std::string text = para.text;
    if (retry) text += detail::retry_suffix(lang);
    return gateway::render_prompt(
        catalog, detail::identify_template_for(lang),
        {{"questions", align::questions_block(hlqs, lang)}, {"text", text}});
}

// All-NA result for a paragraph whose response never became usable.
inline IdentifyResult quarantined_identify(const ParagraphRef& ref,
                                           const std::vector<hlq::HLQ>& hlqs,
                                           std::string reason) {
    IdentifyResult r;
    r.ref = ref;
    r.prompt_language = corpus::text_language(ref.setting);
    r.quarantined = true;
    r.reason = std::move(reason);
    detail::fill_all_na(r, detail::ids_of(hlqs));
    return r;
}

// Turns a first-pass response into a result. A response with no
// recognizable labels is retried once with a stricter format reminder (a
// distinct prompt, so caching cannot replay the failure); a second failure
// quarantines the paragraph with every cell NA. Partial parses stand as-is.
inline IdentifyResult resolve_identify_response(gateway::Gateway& gw,
                                                const gateway::PromptCatalog& catalog,
                                                const ParagraphRef& ref,
                                                const corpus::Paragraph& para,
                                                const std::vector<hlq::HLQ>& hlqs,
                                                const std::string& first_response,
                                                const DetectConfig& cfg = {}) {
    IdentifyResult r;
    r.ref = ref;
    r.prompt_language = corpus::text_language(ref.setting);

    const auto ids = detail::ids_of(hlqs);
    auto parsed = align::parse_identify_response(first_response, ids);

    if (detail::total_parse_failure(parsed) && cfg.retry_unparseable_identify) {
        r.retried = true;
        auto retry_prompt =
            render_identify_prompt(catalog, hlqs, para, r.prompt_language, /*retry=*/true);
        parsed = align::parse_identify_response(gw.complete(retry_prompt).response_text, ids);
    }

    if (detail::total_parse_failure(parsed)) {
        r.quarantined = true;
        r.reason = "identify response had no recognizable question labels";
        detail::fill_all_na(r, ids);
        return r;
    }
    detail::fill_cells(r, parsed);
    return r;
}

// Poses all active questions against one paragraph in a single prompt.
// Provider errors surface as exceptions; the pipeline quarantines those.
inline IdentifyResult identify(gateway::Gateway& gw, const gateway::PromptCatalog& catalog,
                               const ParagraphRef& ref, const corpus::Paragraph& para,
                               const std::vector<hlq::HLQ>& hlqs,
                               const DetectConfig& cfg = {}) {
    if (hlqs.empty()) throw ConfigError("identify requires a non-empty question set");
    auto prompt =
        render_identify_prompt(catalog, hlqs, para, corpus::text_language(ref.setting));
    return resolve_identify_response(gw, catalog, ref, para, hlqs,
                                     gw.complete(prompt).response_text, cfg);
}

}  // namespace pscan::detect
