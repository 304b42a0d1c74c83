#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pscan/align/matrix.hpp"
#include "pscan/corpus/types.hpp"
#include "pscan/util/strings.hpp"
#include "pscan/util/utf8.hpp"

namespace pscan::detect {

// Identifies one paragraph of one article rendition. Orders first by subject,
// then by the canonical setting order (en, ru, en2ru, ru2en), then by index,
// which is the order every store on disk is written in.
struct ParagraphRef {
    std::string subject_id;
    corpus::Setting setting = corpus::Setting::en;
    size_t index = 0;

    bool operator==(const ParagraphRef&) const = default;
    bool operator<(const ParagraphRef& o) const {
        if (subject_id != o.subject_id) return subject_id < o.subject_id;
        if (setting != o.setting) return setting < o.setting;
        return index < o.index;
    }

    std::string key() const {
        return subject_id + "/" + std::string(corpus::to_string(setting)) + "/" +
               std::to_string(index);
    }
};

// Outcome of posing every active question against one paragraph.
struct IdentifyResult {
    ParagraphRef ref;
    corpus::Language prompt_language = corpus::Language::en;
    std::map<std::string, align::AnswerCell> cells;  // question id -> cell
    bool retried = false;      // first response was unparseable end to end
    bool quarantined = false;  // no usable response; every cell is NA
    std::string reason;        // set only when quarantined

    size_t true_count() const {
        size_t n = 0;
        for (const auto& [id, cell] : cells)
            if (cell.answer == align::Answer::True) ++n;
        return n;
    }
};

// One phrase returned by an extraction prompt for a single question.
struct ExtractionSpan {
    std::string text;        // cleaned surface form (quotes stripped, trimmed)
    std::string normalized;  // lowercased form used for equality
    std::string question_id;
    bool verbatim = true;  // substring of the paragraph, case-insensitive

    bool operator==(const ExtractionSpan&) const = default;
};

struct PtsEntry {
    std::string text;  // normalized span text
    std::vector<std::string> question_ids;  // sorted contributors
    bool verbatim = true;

    bool operator==(const PtsEntry&) const = default;
};

// Persuasive text set of a paragraph: ordered unique normalized spans.
// Empty when the paragraph had no True cells or was quarantined.
struct PersuasiveTextSet {
    ParagraphRef ref;
    std::vector<PtsEntry> entries;
    std::vector<std::string> flags;  // "quarantined", "extraction_empty"

    bool operator==(const PersuasiveTextSet&) const = default;
};

// Canonical span form: whitespace-trimmed, enclosing quote pairs removed,
// then lowercased. Equality of spans is equality of this form.
inline std::string normalize_span(std::string_view raw) {
    std::string s = trim(raw);
    while (strip_enclosing_quotes(s)) s = trim(s);
    return utf8::lowercase(s);
}

// Cleaned surface form: same trimming as normalize_span but case-preserving.
inline std::string clean_span(std::string_view raw) {
    std::string s = trim(raw);
    while (strip_enclosing_quotes(s)) s = trim(s);
    return s;
}

struct DetectConfig {
    bool retry_unparseable_identify = true;
    // When set, True cells whose confidence is present and below this value
    // are treated as False for extraction and PTS purposes. Stored cells are
    // never rewritten.
    std::optional<int> min_confidence;
    // Merge spans wholly contained in a longer kept span. Off by default:
    // exact-match dedup only.
    bool containment_collapse = false;
    // Stop after committing identify rows; no extraction calls, no PTS rows.
    // A later full run resumes from those rows and appends only the PTS side.
    bool identify_only = false;
};

// Extraction eligibility of a cell under the configured threshold.
inline bool cell_counts_as_true(const align::AnswerCell& cell, const DetectConfig& cfg) {
    if (cell.answer != align::Answer::True) return false;
    if (cfg.min_confidence && cell.confidence && *cell.confidence < *cfg.min_confidence)
        return false;
    return true;
}

}  // namespace pscan::detect
