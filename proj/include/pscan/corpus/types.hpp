#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pscan/util/errors.hpp"

namespace pscan::corpus {

enum class Language { en, ru };

enum class Setting { en, ru, en2ru, ru2en };

inline constexpr Setting kAllSettings[] = {Setting::en, Setting::ru, Setting::en2ru,
                                           Setting::ru2en};

inline std::string_view to_string(Language lang) {
    return lang == Language::en ? "en" : "ru";
}

inline std::string_view to_string(Setting s) {
    switch (s) {
        case Setting::en: return "en";
        case Setting::ru: return "ru";
        case Setting::en2ru: return "en2ru";
        default: return "ru2en";
    }
}

inline Language parse_language(std::string_view s) {
    if (s == "en") return Language::en;
    if (s == "ru") return Language::ru;
    throw DataError("unknown language '" + std::string(s) + "'");
}

inline Setting parse_setting(std::string_view s) {
    if (s == "en") return Setting::en;
    if (s == "ru") return Setting::ru;
    if (s == "en2ru") return Setting::en2ru;
    if (s == "ru2en") return Setting::ru2en;
    throw DataError("unknown setting '" + std::string(s) + "'");
}

// Language an article's text is written in; translations carry the target
// language.
inline Language text_language(Setting s) {
    return (s == Setting::en || s == Setting::ru2en) ? Language::en : Language::ru;
}

struct LabeledContext {
    std::string context_id;
    std::string article_id;
    std::string text;
    std::set<std::string> gold_techniques;  // empty set encodes the None class
    Language language = Language::en;
};

inline bool collapse_to_binary(const LabeledContext& ctx) {
    return !ctx.gold_techniques.empty();
}

struct Paragraph {
    size_t index = 0;
    std::string text;
    size_t word_count = 0;  // cached canonical count

    bool operator==(const Paragraph&) const = default;
};

struct Article {
    std::string subject_id;
    std::string title;
    Setting setting = Setting::en;
    std::vector<Paragraph> paragraphs;

    size_t word_count() const {
        size_t total = 0;
        for (const auto& p : paragraphs) total += p.word_count;
        return total;
    }

    bool operator==(const Article&) const = default;
};

struct ArticlePair {
    std::string subject_id;
    std::map<Setting, Article> articles;  // en and ru always present

    const Article* find(Setting s) const {
        auto it = articles.find(s);
        return it == articles.end() ? nullptr : &it->second;
    }

    bool operator==(const ArticlePair&) const = default;
};

}  // namespace pscan::corpus
