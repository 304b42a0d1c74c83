#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "pscan/align/matrix.hpp"
#include "pscan/text/tokenizer.hpp"
#include "pscan/util/utf8.hpp"

namespace pscan::align {

struct ParsedAnswer {
    std::string question_id;
    AnswerCell cell;
};

namespace detail {

struct LabelHit {
    size_t start = 0;  // at the 'q'
    size_t end = 0;    // one past the digits
    std::string id;    // canonical "Q<digits>"
};

// Q-labels anywhere in the text: case-insensitive 'q' + digit run with word
// boundaries on both sides, so "FAQ4" and "Q4a" do not count.
inline std::vector<LabelHit> find_labels(std::string_view lower) {
    std::vector<LabelHit> hits;
    for (size_t i = 0; i < lower.size(); ++i) {
        if (lower[i] != 'q') continue;
        if (i > 0 && text::detail::is_word_byte(lower, i - 1)) continue;
        size_t j = i + 1;
        while (j < lower.size() && lower[j] >= '0' && lower[j] <= '9') ++j;
        if (j == i + 1) continue;
        if (j < lower.size() && text::detail::is_word_byte(lower, j)) continue;
        size_t digits = i + 1;
        while (digits + 1 < j && lower[digits] == '0') ++digits;  // "Q007" is Q7
        hits.push_back({i, j, "Q" + std::string(lower.substr(digits, j - digits))});
        i = j - 1;
    }
    return hits;
}

inline bool keyword_at(std::string_view lower, size_t pos, std::string_view kw) {
    if (pos + kw.size() > lower.size()) return false;
    if (lower.substr(pos, kw.size()) != kw) return false;
    if (pos > 0 && text::detail::is_word_byte(lower, pos - 1)) return false;
    // "n/a" ends on a word char by design; the char after must not extend it.
    return !text::detail::is_word_byte(lower, pos + kw.size());
}

struct VerdictHit {
    bool found = false;
    Answer answer = Answer::NA;
    size_t end = 0;  // one past the keyword
};

// First verdict keyword in the window wins; longer keywords are tried first
// so e.g. "not applicable" is never read as a bare "not".
inline VerdictHit find_verdict(std::string_view lower, size_t begin, size_t end) {
    struct Keyword {
        std::string_view word;
        Answer answer;
    };
    static const Keyword kKeywords[] = {
        {"not applicable", Answer::NA},
        {"неприменимо", Answer::NA},
        {"неверно", Answer::False},
        {"истина", Answer::True},
        {"false", Answer::False},
        {"верно", Answer::True},
        {"true", Answer::True},
        {"ложь", Answer::False},
        {"нет", Answer::False},
        {"n/a", Answer::NA},
        {"n\\a", Answer::NA},
        {"д/н", Answer::NA},
        {"н/д", Answer::NA},
        {"да", Answer::True},
        {"na", Answer::NA},
    };
    for (size_t pos = begin; pos < end; ++pos) {
        for (const auto& kw : kKeywords) {
            if (pos + kw.word.size() > end) continue;
            if (keyword_at(lower, pos, kw.word))
                return {true, kw.answer, pos + kw.word.size()};
        }
    }
    return {};
}

// "(conf:NN)", "conf NN", "confidence: NN", or a bare parenthesized "(NN)".
inline std::optional<int> find_confidence(std::string_view lower, size_t begin, size_t end) {
    auto parse_digits_from = [&](size_t pos) -> std::optional<int> {
        while (pos < end && (lower[pos] == ' ' || lower[pos] == ':' || lower[pos] == '=')) ++pos;
        size_t d = pos;
        long value = 0;
        while (d < end && lower[d] >= '0' && lower[d] <= '9' && d - pos < 4) {
            value = value * 10 + (lower[d] - '0');
            ++d;
        }
        if (d == pos) return std::nullopt;
        if (value < 0 || value > 100) return std::nullopt;
        return static_cast<int>(value);
    };
    static constexpr std::string_view kConfWords[] = {"conf", "уверенност"};
    for (size_t pos = begin; pos < end; ++pos) {
        for (auto word : kConfWords) {
            if (pos + word.size() > end || lower.substr(pos, word.size()) != word) continue;
            size_t after = pos + word.size();
            // Swallow the rest of the word ("confidence", "уверенность", ...).
            while (after < end && text::detail::is_word_byte(lower, after)) ++after;
            if (auto v = parse_digits_from(after)) return v;
        }
    }
    for (size_t pos = begin; pos < end; ++pos) {
        if (lower[pos] != '(') continue;
        size_t d = pos + 1;
        while (d < end && lower[d] == ' ') ++d;
        size_t digits = d;
        while (d < end && lower[d] >= '0' && lower[d] <= '9') ++d;
        if (d == digits) continue;
        size_t close = d;
        while (close < end && (lower[close] == ' ' || lower[close] == '%')) ++close;
        if (close < end && lower[close] == ')') {
            if (auto v = parse_digits_from(digits)) return v;
        }
    }
    return std::nullopt;
}

}  // namespace detail

// Tolerant scan of an identify-format response.  Never throws: every
// expected id comes back with a cell, NA + not_found when absent.
inline std::vector<ParsedAnswer> parse_identify_response(
    const std::string& text, const std::vector<std::string>& expected_ids) {
    // All scanning happens on the lowercased copy; original offsets are
    // never consulted, so re-encoding of odd bytes cannot skew anything.
    const std::string lower = utf8::lowercase(text);
    const auto labels = detail::find_labels(lower);

    constexpr size_t kVerdictWindow = 100;
    constexpr size_t kConfidenceWindow = 60;

    std::vector<ParsedAnswer> out;
    out.reserve(expected_ids.size());
    for (const auto& id : expected_ids) {
        ParsedAnswer pa;
        pa.question_id = id;
        size_t seen = 0;
        const detail::LabelHit* first = nullptr;
        size_t first_index = 0;
        for (size_t k = 0; k < labels.size(); ++k) {
            if (labels[k].id != id) continue;
            if (seen++ == 0) {
                first = &labels[k];
                first_index = k;
            }
        }
        if (first == nullptr) {
            pa.cell = {Answer::NA, std::nullopt, CellStatus::not_found};
            out.push_back(std::move(pa));
            continue;
        }
        size_t segment_end = first_index + 1 < labels.size() ? labels[first_index + 1].start
                                                             : lower.size();
        size_t verdict_end = std::min(segment_end, first->end + kVerdictWindow);
        auto verdict = detail::find_verdict(lower, first->end, verdict_end);
        if (verdict.found) {
            pa.cell.answer = verdict.answer;
            if (verdict.answer != Answer::NA) {
                size_t conf_end = std::min(segment_end, verdict.end + kConfidenceWindow);
                pa.cell.confidence = detail::find_confidence(lower, verdict.end, conf_end);
            }
            pa.cell.status = seen > 1 ? CellStatus::duplicate : CellStatus::ok;
        } else {
            pa.cell.answer = Answer::NA;
            pa.cell.status = CellStatus::no_verdict;
        }
        out.push_back(std::move(pa));
    }
    return out;
}

}  // namespace pscan::align
