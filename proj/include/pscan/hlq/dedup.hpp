#pragma once

#include <set>
#include <string>
#include <vector>

#include "pscan/hlq/types.hpp"
#include "pscan/text/tokenizer.hpp"
#include "pscan/util/errors.hpp"
#include "pscan/util/utf8.hpp"

namespace pscan::hlq {

namespace detail {

// Word n-grams over lowercased canonical tokens.  Questions shorter than n
// contribute their whole token sequence as a single gram so they still
// compare equal to exact copies.
inline std::set<std::string> ngram_set(const std::string& text, size_t n) {
    auto tokens = text::tokenize(text);
    for (auto& t : tokens) t = utf8::lowercase(t);
    std::set<std::string> grams;
    if (tokens.empty()) return grams;
    size_t width = tokens.size() < n ? tokens.size() : n;
    for (size_t i = 0; i + width <= tokens.size(); ++i) {
        std::string g = tokens[i];
        for (size_t j = 1; j < width; ++j) {
            g += '\x1f';
            g += tokens[i + j];
        }
        grams.insert(std::move(g));
    }
    return grams;
}

inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    if (a.empty() || b.empty()) return 0.0;
    size_t inter = 0;
    for (const auto& g : a) inter += b.count(g);
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

}  // namespace detail

// Greedy first-wins scan: a question is dropped iff its n-gram Jaccard
// similarity with some already-kept question reaches the threshold.
inline std::vector<HLQ> dedup_by_ngram_overlap(const std::vector<HLQ>& questions, size_t n = 3,
                                               double threshold = 0.7) {
    if (n < 1) throw ConfigError("n-gram size must be >= 1");
    if (!(threshold > 0.0) || threshold > 1.0)
        throw ConfigError("dedup threshold must be in (0, 1]");
    std::vector<HLQ> kept;
    std::vector<std::set<std::string>> kept_grams;
    for (const auto& q : questions) {
        auto grams = detail::ngram_set(q.text_en, n);
        bool duplicate = false;
        for (const auto& kg : kept_grams) {
            if (detail::jaccard(grams, kg) >= threshold) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        kept.push_back(q);
        kept_grams.push_back(std::move(grams));
    }
    return kept;
}

}  // namespace pscan::hlq
