#pragma once

#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "pscan/corpus/techniques.hpp"
#include "pscan/corpus/types.hpp"
#include "pscan/util/errors.hpp"
#include "pscan/util/io.hpp"
#include "pscan/util/strings.hpp"

namespace pscan::corpus {

inline constexpr std::string_view kLabeledHeader =
    "context_id\tarticle_id\tlanguage\ttechniques\ttext";

// Tab-separated, UTF-8, header row. The techniques column joins names with
// ';'; an empty column or the bare token "None" encodes the None class.
inline std::vector<LabeledContext> load_labeled_dataset(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.empty()) throw DataError(path + ": empty labeled dataset (missing header)");
    if (trim_view(lines[0]) != kLabeledHeader)
        throw DataError(path + ": unexpected header '" + lines[0] + "'");

    std::vector<LabeledContext> out;
    std::unordered_set<std::string> seen_ids;
    for (size_t li = 1; li < lines.size(); ++li) {
        const std::string& line = lines[li];
        if (trim_view(line).empty()) continue;
        const size_t lineno = li + 1;
        auto cols = split(line, '\t');
        if (cols.size() != 5)
            throw DataError(path + ": malformed row at line " + std::to_string(lineno) +
                            " (expected 5 tab-separated columns, got " +
                            std::to_string(cols.size()) + ")");

        LabeledContext ctx;
        ctx.context_id = trim(cols[0]);
        ctx.article_id = trim(cols[1]);
        ctx.language = parse_language(trim_view(cols[2]));
        ctx.text = cols[4];
        if (ctx.context_id.empty())
            throw DataError(path + ": empty context_id at line " + std::to_string(lineno));
        if (trim_view(ctx.text).empty())
            throw DataError(path + ": empty text at line " + std::to_string(lineno));
        if (!seen_ids.insert(ctx.context_id).second)
            throw DataError(path + ": duplicate context_id '" + ctx.context_id + "' at line " +
                            std::to_string(lineno));

        std::string techniques = trim(cols[3]);
        if (!techniques.empty() && techniques != kNoneClass) {
            for (const auto& raw : split(techniques, ';')) {
                std::string name = trim(raw);
                if (name.empty()) continue;
                if (!is_known_technique(name))
                    throw DataError(path + ": unknown technique '" + name + "' at line " +
                                    std::to_string(lineno));
                ctx.gold_techniques.insert(name);
            }
        }
        out.push_back(std::move(ctx));
    }
    return out;
}

}  // namespace pscan::corpus
