#pragma once

#include <string>
#include <vector>

#include "pscan/align/matrix.hpp"
#include "pscan/align/parse.hpp"
#include "pscan/corpus/types.hpp"
#include "pscan/gateway/prompt.hpp"
#include "pscan/gateway/provider.hpp"
#include "pscan/hlq/types.hpp"

namespace pscan::align {

// One "Qk: text" line per question, the block format both the prompt and the
// response parser share.
inline std::string questions_block(const std::vector<hlq::HLQ>& hlqs, corpus::Language lang) {
    std::string out;
    for (const auto& q : hlqs) {
        if (!out.empty()) out += '\n';
        out += q.id;
        out += ": ";
        out += lang == corpus::Language::ru && !q.text_ru.empty() ? q.text_ru : q.text_en;
    }
    return out;
}

struct AnswerRun {
    AnswerMatrix matrix;
    std::vector<std::string> errors;  // per-context failures, isolated
};

// One identify-format prompt per context; responses parsed into matrix rows.
// A failed or unparseable context never aborts the batch: its row is NA.
inline AnswerRun answer_hlqs_batched(gateway::Gateway& gw,
                                     const gateway::PromptCatalog& catalog,
                                     const std::vector<corpus::LabeledContext>& contexts,
                                     const std::vector<hlq::HLQ>& hlqs) {
    if (hlqs.empty()) throw ConfigError("cannot answer an empty question set");

    AnswerRun run;
    for (const auto& q : hlqs) run.matrix.question_ids.push_back(q.id);

    std::vector<gateway::ChatPrompt> prompts;
    prompts.reserve(contexts.size());
    for (const auto& ctx : contexts) {
        const char* tmpl = ctx.language == corpus::Language::ru ? "identify_ru" : "identify_en";
        prompts.push_back(gateway::render_prompt(
            catalog, tmpl,
            {{"questions", questions_block(hlqs, ctx.language)}, {"text", ctx.text}}));
    }

    auto results = gw.batch_complete(prompts);
    for (size_t i = 0; i < contexts.size(); ++i) {
        run.matrix.context_ids.push_back(contexts[i].context_id);
        run.matrix.gold.push_back(corpus::collapse_to_binary(contexts[i]));
        std::vector<AnswerCell> row(hlqs.size());
        if (results[i].ok) {
            auto parsed = parse_identify_response(results[i].record.response_text,
                                                  run.matrix.question_ids);
            for (size_t c = 0; c < parsed.size(); ++c) row[c] = parsed[c].cell;
        } else {
            for (auto& cell : row) cell = {Answer::NA, std::nullopt, CellStatus::not_found};
            run.errors.push_back(contexts[i].context_id + ": " + results[i].error);
        }
        run.matrix.cells.push_back(std::move(row));
    }
    run.matrix.validate();
    return run;
}

}  // namespace pscan::align
