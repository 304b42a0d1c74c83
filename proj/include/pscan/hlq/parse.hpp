#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pscan/util/strings.hpp"

namespace pscan::hlq {

namespace detail {

// Matching enclosing quote pairs stripped from a candidate question.
// Leading "1.", "2)", "3:" or bullet markers left by list-formatted responses.
inline void strip_enumeration_marker(std::string& s) {
    size_t i = 0;
    if (!s.empty() && s[0] == '(') ++i;
    size_t digits_start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i > digits_start && i < s.size()) {
        if (digits_start == 0 && (s[i] == '.' || s[i] == ')' || s[i] == ':')) {
            s.erase(0, i + 1);
            return;
        }
        if (digits_start == 1 && s[i] == ')') {
            s.erase(0, i + 1);
            return;
        }
    }
    static const std::string_view kBullets[] = {"-", "*", "•", "–", "—"};
    for (auto b : kBullets) {
        if (s.size() > b.size() && std::string_view(s).substr(0, b.size()) == b &&
            s[b.size()] == ' ') {
            s.erase(0, b.size());
            return;
        }
    }
}

// "Here are questions: A?" keeps only "A?".  Anchoring on the trailing
// question mark avoids truncating questions that merely contain a colon but
// no preamble shape (colon must be followed by whitespace).
inline void strip_preamble_before_colon(std::string& s) {
    if (s.empty() || s.back() != '?') return;
    for (size_t i = s.size(); i-- > 1;) {
        if (s[i] != ' ' && s[i] != '\t' && s[i] != '\n' && s[i] != '\r') continue;
        if (s[i - 1] != ':') continue;
        auto rest = trim(s.substr(i));
        if (!rest.empty() && rest.back() == '?') s = std::move(rest);
        return;
    }
}

}  // namespace detail

// Splits a semicolon-separated generation response into clean question texts.
// Garbage in, empty list out; the caller decides whether that is an error.
inline std::vector<std::string> parse_question_list(const std::string& text) {
    std::vector<std::string> out;
    for (auto& piece : split(text, ';')) {
        std::string q = trim(piece);
        // Stripping a preamble can expose a fresh marker or quote layer, so
        // normalize to a fixpoint (bounded; each pass shrinks the string).
        for (std::string before; before != q;) {
            before = q;
            detail::strip_enumeration_marker(q);
            q = trim(q);
            while (strip_enclosing_quotes(q)) q = trim(q);
            detail::strip_preamble_before_colon(q);
            q = trim(q);
        }
        if (q.empty() || q.back() != '?') continue;
        out.push_back(std::move(q));
    }
    return out;
}

}  // namespace pscan::hlq
