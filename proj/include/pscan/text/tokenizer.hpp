#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pscan/util/strings.hpp"
#include "pscan/util/utf8.hpp"

// Canonical word tokenizer: a simple sentence-boundary rule followed by
// Penn-Treebank-style word tokenization of each sentence. The behavior is
// frozen by data/goldens/tokenizer_goldens.jsonl (regenerated by
// tools/gen_tokenizer_goldens.py); every metric in the library counts words
// through this tokenizer.

namespace pscan::text {

namespace detail {

// Word characters: ASCII alphanumerics, underscore, and the Cyrillic block.
inline bool is_word_cp(char32_t cp) {
    if ((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z')) return true;
    if (cp >= U'0' && cp <= U'9') return true;
    if (cp == U'_') return true;
    return utf8::is_cyrillic(cp);
}

inline bool is_word_at(std::string_view s, size_t pos) {
    if (pos >= s.size()) return false;
    size_t i = pos;
    return is_word_cp(utf8::decode(s, i));
}

// True if a word boundary sits before `pos` (prev char and char at pos differ
// in wordness). Only called where the char at pos-1 is single-byte ASCII or
// the caller tracks codepoint starts.
inline bool is_word_byte(std::string_view s, size_t pos) {
    if (pos >= s.size()) return false;
    unsigned char c = static_cast<unsigned char>(s[pos]);
    if (c < 0x80) return is_word_cp(c);
    // Find the codepoint start covering pos.
    size_t start = pos;
    while (start > 0 && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) --start;
    size_t i = start;
    return is_word_cp(utf8::decode(s, i));
}

// End-of-string anchor with the usual regex twist: $ also matches just
// before a single trailing newline.
inline bool at_dollar(std::string_view s, size_t pos) {
    if (pos == s.size()) return true;
    return pos + 1 == s.size() && s[pos] == '\n';
}

inline bool starts_with_at(std::string_view s, size_t pos, std::string_view lit) {
    return s.compare(pos, lit.size(), lit) == 0;
}

inline char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

inline bool imatch_at(std::string_view s, size_t pos, std::string_view lit) {
    if (pos + lit.size() > s.size()) return false;
    for (size_t k = 0; k < lit.size(); ++k) {
        if (lower(s[pos + k]) != lower(lit[k])) return false;
    }
    return true;
}

// --- Ordered substitution passes. Only separation points matter for the
// --- final whitespace split, but scanning is kept left-to-right and
// --- non-overlapping to mirror the golden generator exactly.

inline std::string pass_starting_quotes(std::string_view s) {
    static const std::string_view open_quotes[] = {"\xC2\xAB", "\xE2\x80\x9C", "\xE2\x80\x98",
                                                   "\xE2\x80\x9E"};  // « “ ‘ „
    // Rule 1: unicode openers and backtick runs get spaces around them.
    std::string t;
    t.reserve(s.size() + 16);
    size_t i = 0;
    while (i < s.size()) {
        bool hit = false;
        for (auto q : open_quotes) {
            if (starts_with_at(s, i, q)) {
                t.push_back(' ');
                t.append(q);
                t.push_back(' ');
                i += q.size();
                hit = true;
                break;
            }
        }
        if (hit) continue;
        if (s[i] == '`') {
            size_t j = i;
            while (j < s.size() && s[j] == '`') ++j;
            t.push_back(' ');
            t.append(s.substr(i, j - i));
            t.push_back(' ');
            i = j;
            continue;
        }
        t.push_back(s[i++]);
    }
    // Rule 2: a leading double quote becomes ``.
    if (!t.empty() && t[0] == '"') t.replace(0, 1, "``");
    // Rule 3: every `` gets spaces around it.
    std::string u;
    u.reserve(t.size() + 8);
    for (size_t k = 0; k < t.size();) {
        if (starts_with_at(t, k, "``")) {
            u.append(" `` ");
            k += 2;
        } else {
            u.push_back(t[k++]);
        }
    }
    // Rule 4: " or '' after a space/opening bracket becomes ``.
    std::string v;
    v.reserve(u.size() + 8);
    for (size_t k = 0; k < u.size();) {
        char c = u[k];
        bool opener = (c == ' ' || c == '(' || c == '[' || c == '{' || c == '<');
        if (opener && k + 1 < u.size() &&
            (u[k + 1] == '"' || (u[k + 1] == '\'' && k + 2 < u.size() && u[k + 2] == '\''))) {
            size_t quote_len = (u[k + 1] == '"') ? 1 : 2;
            v.push_back(c);
            v.append(" `` ");
            k += 1 + quote_len;
        } else {
            v.push_back(u[k++]);
        }
    }
    // Rule 5: apostrophe + one-letter word splits, unless the letters after
    // the apostrophe begin a known contraction suffix.
    std::string w;
    w.reserve(v.size() + 8);
    for (size_t k = 0; k < v.size();) {
        if (v[k] == '\'' && k + 1 < v.size()) {
            size_t p = k + 1;
            bool excluded = false;
            char n0 = lower(v[p]);
            if (n0 == 'm' || n0 == 't' || n0 == 's' || n0 == 'd' || n0 == 'n') excluded = true;
            if (!excluded && (imatch_at(v, p, "re") || imatch_at(v, p, "ve") || imatch_at(v, p, "ll")))
                excluded = true;
            if (!excluded) {
                size_t q = p;
                char32_t cp = utf8::decode(v, q);
                if (is_word_cp(cp) && !is_word_byte(v, q)) {
                    w.push_back('\'');
                    w.push_back(' ');
                    w.append(v.substr(p, q - p));
                    k = q;
                    continue;
                }
            }
        }
        w.push_back(v[k++]);
    }
    return w;
}

inline bool in_set(char c, std::string_view set) { return set.find(c) != std::string_view::npos; }

// Final-period rules share shape: [^.] then '.' then a run over `closers`
// then \s* then $.
inline std::string pass_final_period(std::string_view s, bool closers_include_unicode,
                                     bool space_before_closers) {
    // Leftmost match only; the pattern is anchored at the end so at most one
    // substitution applies.
    for (size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == '.' || s[i + 1] != '.') continue;
        size_t j = i + 2;
        std::string closer_run;
        while (j < s.size()) {
            if (in_set(s[j], "])}>\"'")) {
                closer_run.push_back(s[j]);
                ++j;
                continue;
            }
            if (closers_include_unicode) {
                if (s[j] == ' ') {
                    closer_run.push_back(' ');
                    ++j;
                    continue;
                }
                bool u = false;
                for (std::string_view q : {std::string_view("\xC2\xBB"), std::string_view("\xE2\x80\x9D"),
                                           std::string_view("\xE2\x80\x99")}) {  // » ” ’
                    if (starts_with_at(s, j, q)) {
                        closer_run.append(q);
                        j += q.size();
                        u = true;
                        break;
                    }
                }
                if (u) continue;
            }
            break;
        }
        size_t k = j;
        while (k < s.size() && is_space(s[k])) ++k;
        if (!at_dollar(s, k)) continue;
        std::string out(s.substr(0, i + 1));
        out.push_back(' ');
        out.push_back('.');
        if (space_before_closers) out.push_back(' ');
        out.append(closer_run);
        out.push_back(' ');
        out.append(s.substr(k));
        return out;
    }
    return std::string(s);
}

inline std::string pass_colon_comma(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 8);
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if ((c == ':' || c == ',') && i + 1 < s.size() && !(s[i + 1] >= '0' && s[i + 1] <= '9')) {
            out.push_back(' ');
            out.push_back(c);
            out.push_back(' ');
            out.push_back(s[i + 1]);
            i += 2;
        } else {
            out.push_back(c);
            ++i;
        }
    }
    // Trailing colon/comma at the anchor.
    for (size_t i = 0; i < out.size(); ++i) {
        if ((out[i] == ':' || out[i] == ',') && at_dollar(out, i + 1)) {
            std::string t = out.substr(0, i);
            t.push_back(' ');
            t.push_back(out[i]);
            t.push_back(' ');
            t.append(out.substr(i + 1));
            return t;
        }
    }
    return out;
}

inline std::string pass_space_chars(std::string_view s, std::string_view chars) {
    std::string out;
    out.reserve(s.size() + 8);
    for (size_t i = 0; i < s.size(); ++i) {
        if (in_set(s[i], chars)) {
            out.push_back(' ');
            out.push_back(s[i]);
            out.push_back(' ');
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

inline std::string pass_ellipsis(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 8);
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '.' && i + 1 < s.size() && s[i + 1] == '.') {
            size_t j = i;
            while (j < s.size() && s[j] == '.') ++j;
            out.push_back(' ');
            out.append(s.substr(i, j - i));
            out.push_back(' ');
            i = j;
        } else {
            out.push_back(s[i++]);
        }
    }
    return out;
}

inline std::string pass_apostrophe_space(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 8);
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '\'' && i + 2 < s.size() && s[i + 1] == '\'' && s[i + 2] == ' ') {
            out.push_back(s[i]);
            out.append(" ' ");
            i += 3;
        } else {
            out.push_back(s[i++]);
        }
    }
    return out;
}

inline std::string pass_double_dash(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 8);
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '-' && i + 1 < s.size() && s[i + 1] == '-') {
            out.append(" -- ");
            i += 2;
        } else {
            out.push_back(s[i++]);
        }
    }
    return out;
}

inline std::string pass_ending_quotes(std::string_view s) {
    // Unicode closers get spaces around them.
    std::string t;
    t.reserve(s.size() + 8);
    for (size_t i = 0; i < s.size();) {
        bool hit = false;
        for (std::string_view q : {std::string_view("\xC2\xBB"), std::string_view("\xE2\x80\x9D"),
                                   std::string_view("\xE2\x80\x99")}) {  // » ” ’
            if (starts_with_at(s, i, q)) {
                t.push_back(' ');
                t.append(q);
                t.push_back(' ');
                i += q.size();
                hit = true;
                break;
            }
        }
        if (!hit) t.push_back(s[i++]);
    }
    // '' and remaining " become closing quote tokens.
    std::string u;
    u.reserve(t.size() + 8);
    for (size_t i = 0; i < t.size();) {
        if (t[i] == '\'' && i + 1 < t.size() && t[i + 1] == '\'') {
            u.append(" '' ");
            i += 2;
        } else if (t[i] == '"') {
            u.append(" '' ");
            i += 1;
        } else {
            u.push_back(t[i++]);
        }
    }
    // Possessive / short contraction suffixes followed by a space.
    std::string v;
    v.reserve(u.size() + 8);
    for (size_t i = 0; i < u.size();) {
        if (u[i] != '\'' && u[i] != ' ' && i + 1 < u.size() && u[i + 1] == '\'') {
            size_t suffix_len = 0;  // length after the apostrophe
            if (i + 3 < u.size() && (u[i + 2] == 's' || u[i + 2] == 'S' || u[i + 2] == 'm' ||
                                     u[i + 2] == 'M' || u[i + 2] == 'd' || u[i + 2] == 'D') &&
                u[i + 3] == ' ') {
                suffix_len = 1;
            } else if (i + 2 < u.size() && u[i + 2] == ' ') {
                suffix_len = 0;
            } else {
                v.push_back(u[i++]);
                continue;
            }
            v.push_back(u[i]);
            v.push_back(' ');
            v.push_back('\'');
            if (suffix_len == 1) v.push_back(u[i + 2]);
            v.push_back(' ');
            i += 2 + suffix_len + 1;
        } else {
            v.push_back(u[i++]);
        }
    }
    // Longer contraction suffixes ('ll 're 've n't, exact cases) + space.
    static const std::string_view suffixes[] = {"'ll", "'LL", "'re", "'RE",
                                                "'ve", "'VE", "n't", "N'T"};
    std::string w;
    w.reserve(v.size() + 8);
    for (size_t i = 0; i < v.size();) {
        bool done = false;
        if (v[i] != '\'' && v[i] != ' ') {
            for (auto suf : suffixes) {
                if (i + 1 + suf.size() < v.size() && starts_with_at(v, i + 1, suf) &&
                    v[i + 1 + suf.size()] == ' ') {
                    w.push_back(v[i]);
                    w.push_back(' ');
                    w.append(suf);
                    w.push_back(' ');
                    i += 1 + suf.size() + 1;
                    done = true;
                    break;
                }
            }
        }
        if (!done) w.push_back(v[i++]);
    }
    return w;
}

inline std::string pass_contractions(std::string_view s) {
    struct Pair {
        std::string_view a, b;
        bool lookahead_space;  // wanna requires trailing whitespace
    };
    static const Pair pairs[] = {{"can", "not", false}, {"d", "'ye", false}, {"gim", "me", false},
                                 {"gon", "na", false},  {"got", "ta", false}, {"lem", "me", false},
                                 {"more", "'n", false}, {"wan", "na", true}};
    std::string out(s);
    for (const auto& p : pairs) {
        std::string t;
        t.reserve(out.size() + 8);
        size_t i = 0;
        size_t total = p.a.size() + p.b.size();
        while (i < out.size()) {
            bool boundary_before = (i == 0) || !is_word_byte(out, i - 1);
            if (boundary_before && imatch_at(out, i, p.a) && imatch_at(out, i + p.a.size(), p.b)) {
                size_t end = i + total;
                bool boundary_after = !is_word_at(out, end);
                bool ok = p.lookahead_space ? (end < out.size() && is_space(out[end]))
                                            : boundary_after;
                if (ok) {
                    t.push_back(' ');
                    t.append(out.substr(i, p.a.size()));
                    t.push_back(' ');
                    t.append(out.substr(i + p.a.size(), p.b.size()));
                    t.push_back(' ');
                    i = end;
                    continue;
                }
            }
            t.push_back(out[i++]);
        }
        out = std::move(t);
    }
    // " 'tis" / " 'twas" split after the t.
    static const Pair triples[] = {{"'t", "is", false}, {"'t", "was", false}};
    for (const auto& p : triples) {
        std::string t;
        t.reserve(out.size() + 8);
        size_t i = 0;
        size_t total = p.a.size() + p.b.size();
        while (i < out.size()) {
            if (out[i] == ' ' && imatch_at(out, i + 1, p.a) &&
                imatch_at(out, i + 1 + p.a.size(), p.b) && !is_word_at(out, i + 1 + total)) {
                t.push_back(' ');
                t.append(out.substr(i + 1, p.a.size()));
                t.push_back(' ');
                t.append(out.substr(i + 1 + p.a.size(), p.b.size()));
                t.push_back(' ');
                i += 1 + total;
                continue;
            }
            t.push_back(out[i++]);
        }
        out = std::move(t);
    }
    return out;
}

inline std::vector<std::string> treebank_tokenize(std::string_view sentence) {
    std::string t = pass_starting_quotes(sentence);
    t = pass_final_period(t, /*closers_include_unicode=*/true, /*space_before_closers=*/true);
    t = pass_colon_comma(t);
    t = pass_ellipsis(t);
    t = pass_space_chars(t, ";@#$%&");
    t = pass_final_period(t, /*closers_include_unicode=*/false, /*space_before_closers=*/false);
    t = pass_space_chars(t, "?!");
    t = pass_apostrophe_space(t);
    t = pass_space_chars(t, "*");
    t = pass_space_chars(t, "[]{}()<>");
    t = pass_double_dash(t);
    t = " " + t + " ";
    t = pass_ending_quotes(t);
    t = pass_contractions(t);

    std::vector<std::string> tokens;
    size_t i = 0;
    while (i < t.size()) {
        while (i < t.size() && is_space(t[i])) ++i;
        size_t j = i;
        while (j < t.size() && !is_space(t[j])) ++j;
        if (j > i) tokens.emplace_back(t.substr(i, j - i));
        i = j;
    }
    return tokens;
}

inline bool is_closer_byte(char c) { return in_set(c, "\"')]}"); }

}  // namespace detail

// Sentence boundaries: after a run of [.?!] plus attached closing characters,
// when whitespace follows and the next visible character opens a sentence.
// No abbreviation list; "Dr. Smith" splits after "Dr.".
inline std::vector<std::string> split_sentences(std::string_view text) {
    using namespace detail;
    static const std::string_view uni_closers[] = {"\xC2\xBB", "\xE2\x80\x9D", "\xE2\x80\x99"};
    static const std::string_view uni_openers[] = {"\xC2\xAB", "\xE2\x80\x9C", "\xE2\x80\x98"};
    std::vector<std::string> sentences;
    size_t start = 0;
    size_t i = 0;
    const size_t n = text.size();
    auto is_open_char = [&](size_t pos) {
        char c = text[pos];
        if (c == '"' || c == '\'' || c == '(' || c == '[' || c == '{') return true;
        for (auto q : uni_openers)
            if (starts_with_at(text, pos, q)) return true;
        size_t p = pos;
        char32_t cp = utf8::decode(text, p);
        return utf8::is_upper(cp) || (cp >= U'0' && cp <= U'9');
    };
    while (i < n) {
        char c = text[i];
        if (c == '.' || c == '?' || c == '!') {
            size_t j = i;
            while (j < n && (text[j] == '.' || text[j] == '?' || text[j] == '!')) ++j;
            size_t k = j;
            for (;;) {
                if (k < n && is_closer_byte(text[k])) {
                    ++k;
                    continue;
                }
                bool u = false;
                for (auto q : uni_closers) {
                    if (k < n && starts_with_at(text, k, q)) {
                        k += q.size();
                        u = true;
                        break;
                    }
                }
                if (!u) break;
            }
            size_t m = k;
            while (m < n && is_space(text[m])) ++m;
            if (m > k && m < n && is_open_char(m)) {
                sentences.emplace_back(text.substr(start, k - start));
                start = m;
                i = m;
                continue;
            }
            i = (k > i) ? k : i + 1;
        } else {
            ++i;
        }
    }
    if (start < n) sentences.emplace_back(text.substr(start));
    std::vector<std::string> out;
    for (auto& s : sentences) {
        if (!trim_view(s).empty()) out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    for (const auto& sentence : split_sentences(text)) {
        auto toks = detail::treebank_tokenize(sentence);
        tokens.insert(tokens.end(), toks.begin(), toks.end());
    }
    return tokens;
}

inline size_t word_count(std::string_view text) { return tokenize(text).size(); }

}  // namespace pscan::text
