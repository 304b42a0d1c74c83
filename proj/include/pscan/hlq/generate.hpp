#pragma once

#include <string>
#include <vector>

#include "pscan/corpus/techniques.hpp"
#include "pscan/gateway/prompt.hpp"
#include "pscan/gateway/provider.hpp"
#include "pscan/hlq/parse.hpp"
#include "pscan/hlq/types.hpp"

namespace pscan::hlq {

// One zero-shot generation call for one technique.  Fresh ids are allocated
// from next_id so a multi-technique run never reuses an id.
inline std::vector<HLQ> generate_candidates(gateway::Gateway& gw,
                                            const gateway::PromptCatalog& catalog,
                                            const std::string& technique,
                                            size_t& next_id) {
    const auto* def = corpus::find_technique(technique);
    if (def == nullptr) throw ConfigError("unknown technique '" + technique + "'");
    auto prompt = gateway::render_prompt(
        catalog, "hlq_gen",
        {{"task", std::string(def->name)}, {"definition", std::string(def->definition)}});
    auto result = gw.complete(prompt);
    auto texts = parse_question_list(result.response_text);
    if (texts.empty())
        throw DataError("no questions parsed from generation response for technique '" +
                        technique + "'; raw response: " + result.response_text);
    std::vector<HLQ> out;
    out.reserve(texts.size());
    for (auto& t : texts) {
        HLQ q;
        q.id = "Q" + std::to_string(next_id++);
        q.text_en = std::move(t);
        q.source_technique = technique;
        q.active = false;
        out.push_back(std::move(q));
    }
    return out;
}

}  // namespace pscan::hlq
