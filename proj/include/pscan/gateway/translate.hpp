#pragma once

#include <string>
#include <vector>

#include "pscan/corpus/types.hpp"
#include "pscan/gateway/prompt.hpp"
#include "pscan/gateway/provider.hpp"
#include "pscan/text/tokenizer.hpp"
#include "pscan/util/errors.hpp"

namespace pscan::gateway {

enum class MtDirection { en2ru, ru2en };

inline std::string_view to_string(MtDirection d) {
    return d == MtDirection::en2ru ? "en2ru" : "ru2en";
}

inline std::string_view mt_template_name(MtDirection d) {
    return d == MtDirection::en2ru ? "mt_en2ru" : "mt_ru2en";
}

struct TranslatedParagraph {
    std::string text;       // provider output, verbatim
    std::string direction;  // provenance
    std::string model_id;   // provenance
};

inline TranslatedParagraph translate_paragraph(Gateway& gateway, const PromptCatalog& catalog,
                                               const std::string& text, MtDirection direction) {
    if (trim_view(text).empty()) throw DataError("empty paragraph");
    auto prompt =
        render_prompt(catalog, std::string(mt_template_name(direction)), {{"text", text}});
    auto record = gateway.complete(prompt);
    return TranslatedParagraph{record.response_text, std::string(to_string(direction)),
                               gateway.config().model_id};
}

// Translates every paragraph of an article independently (one call each) and
// returns the translated article under the derived setting.
inline corpus::Article translate_article(Gateway& gateway, const PromptCatalog& catalog,
                                         const corpus::Article& source, MtDirection direction) {
    corpus::Setting target =
        direction == MtDirection::en2ru ? corpus::Setting::en2ru : corpus::Setting::ru2en;

    std::vector<ChatPrompt> prompts;
    prompts.reserve(source.paragraphs.size());
    for (const auto& para : source.paragraphs) {
        if (trim_view(para.text).empty()) throw DataError("empty paragraph");
        prompts.push_back(render_prompt(catalog, std::string(mt_template_name(direction)),
                                        {{"text", para.text}}));
    }
    auto results = gateway.batch_complete(prompts);

    corpus::Article out;
    out.subject_id = source.subject_id;
    out.title = source.title;
    out.setting = target;
    for (size_t i = 0; i < results.size(); ++i) {
        if (!results[i].ok)
            throw ProviderError("translation failed for paragraph " + std::to_string(i) + " of '" +
                                    source.subject_id + "': " + results[i].error,
                                results[i].error_status);
        corpus::Paragraph p;
        p.index = i;
        p.text = results[i].record.response_text;
        p.word_count = text::word_count(p.text);
        out.paragraphs.push_back(std::move(p));
    }
    return out;
}

}  // namespace pscan::gateway
