#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pscan/corpus/techniques.hpp"
#include "pscan/util/errors.hpp"
#include "pscan/util/io.hpp"
#include "pscan/util/strings.hpp"

namespace pscan::gateway {

// A chat prompt, either a template (placeholders unbound) or fully rendered.
// template_name and language are routing metadata and never contribute to
// rendered bytes, so renaming a template does not invalidate cached replies.
struct ChatPrompt {
    std::string system;
    std::vector<std::pair<std::string, std::string>> exchanges;  // (user, agent)
    std::string final_user;
    std::string pre_generation_prefix;  // empty = none; prepended verbatim to the reply

    std::string template_name;
    std::string language;  // "en" or "ru"

    bool operator==(const ChatPrompt&) const = default;
};

// Canonical byte serialization used for cache keys and golden comparisons.
inline std::string rendered_bytes(const ChatPrompt& p) {
    std::string out;
    out += "@system\n";
    out += p.system;
    for (const auto& [user, agent] : p.exchanges) {
        out += "\n@user\n";
        out += user;
        out += "\n@agent\n";
        out += agent;
    }
    out += "\n@final_user\n";
    out += p.final_user;
    if (!p.pre_generation_prefix.empty()) {
        out += "\n@prefix\n";
        out += p.pre_generation_prefix;
    }
    return out;
}

namespace detail {

inline bool is_placeholder_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace detail

// Substitutes {name} placeholders in a single left-to-right pass; substituted
// values are never re-scanned. A brace sequence that does not form a valid
// placeholder name is kept literally.
inline std::string substitute_placeholders(std::string_view text,
                                           const std::map<std::string, std::string>& vars) {
    std::string out;
    out.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '{') {
            out.push_back(text[i++]);
            continue;
        }
        size_t j = i + 1;
        while (j < text.size() && detail::is_placeholder_char(text[j])) ++j;
        if (j > i + 1 && j < text.size() && text[j] == '}') {
            std::string name(text.substr(i + 1, j - i - 1));
            auto it = vars.find(name);
            if (it == vars.end()) throw ConfigError("unbound placeholder '" + name + "'");
            out += it->second;
            i = j + 1;
        } else {
            out.push_back(text[i++]);
        }
    }
    return out;
}

using PromptCatalog = std::map<std::string, ChatPrompt>;

namespace detail {

inline std::string baseline_system_text() {
    std::string s =
        "Your task is to assign PersuasionTech types and confidence scores to given text (if "
        "more than one semicolon separated). You have a background in public relations, "
        "political science, and international relations. Confidence has integer value 0-100 "
        "(100 being the highest confidence). PersuasionTech has 24 possible values, here is "
        "value (definition) for each:";
    for (size_t i = 0; i < corpus::kTechniqueCatalog.size(); ++i) {
        s += '\n';
        s += std::to_string(i + 1);
        s += ". ";
        s += corpus::kTechniqueCatalog[i].name;
        s += ": ";
        s += corpus::kTechniqueCatalog[i].definition;
    }
    return s;
}

inline constexpr std::string_view kIdentifyExemplarUserEn =
    "Ukraine's government is “openly neo-Nazi” and “pro-Nazi,” controlled "
    "by “little Nazis,” President Vladimir V. Putin of Russia says.";

inline constexpr std::string_view kIdentifyExemplarAgent =
    "Q1: True (conf:70); Q2: False (conf:30); Q3: N/A; ...";

inline constexpr std::string_view kExtractExemplarAgentEn =
    "“openly neo-Nazi”; “pro-Nazi”; “little Nazis”";

inline constexpr std::string_view kIdentifyExemplarUserRu =
    "Правительство соседней страны, по словам чиновника, «откровенно враждебно» и "
    "«управляется марионетками».";

inline constexpr std::string_view kExtractExemplarAgentRu =
    "«откровенно враждебно»; «управляется марионетками»";

}  // namespace detail

// Compiled-in source of truth for the eight templates. The files under
// data/prompts/ mirror this catalog byte for byte (a test pins the sync).
inline PromptCatalog builtin_prompt_catalog() {
    PromptCatalog cat;

    {
        ChatPrompt p;
        p.template_name = "baseline";
        p.language = "en";
        p.system = detail::baseline_system_text();
        p.final_user = "{text}";
        cat[p.template_name] = std::move(p);
    }
    {
        ChatPrompt p;
        p.template_name = "hlq_gen";
        p.language = "en";
        p.system =
            "Given a task X, your goal is to come up with a list of questions Y. The list Y "
            "contains questions that break the task into simpler components. Questions in "
            "list Y should be binomial: True or False. Questions in list Y should be "
            "semicolon separated. Avoid questions that rephrase the task, but do not "
            "simplify it.";
        p.final_user = "{task}: {definition}";
        cat[p.template_name] = std::move(p);
    }
    {
        ChatPrompt p;
        p.template_name = "identify_en";
        p.language = "en";
        p.system =
            "Given a piece of text your goal is to answer each of the following questions as "
            "'True', 'False', or 'N/A' (if question is not applicable) plus a confidence "
            "measure from 0-100.\nQuestions: {questions}";
        p.exchanges.emplace_back(std::string(detail::kIdentifyExemplarUserEn),
                                 std::string(detail::kIdentifyExemplarAgent));
        p.final_user = "{text}";
        p.pre_generation_prefix = "Q1:";
        cat[p.template_name] = std::move(p);
    }
    {
        ChatPrompt p;
        p.template_name = "identify_ru";
        p.language = "ru";
        p.system =
            "Дан фрагмент текста. Ваша задача - ответить на каждый из следующих вопросов "
            "'True', 'False' или 'N/A' (если вопрос неприменим), добавив меру уверенности "
            "от 0 до 100.\nQuestions: {questions}";
        p.exchanges.emplace_back(std::string(detail::kIdentifyExemplarUserRu),
                                 std::string(detail::kIdentifyExemplarAgent));
        p.final_user = "{text}";
        p.pre_generation_prefix = "Q1:";
        cat[p.template_name] = std::move(p);
    }
    {
        ChatPrompt p;
        p.template_name = "extract_en";
        p.language = "en";
        p.system =
            "Given a piece of text your are tasked with a question: {question} Identify "
            "specific language instances separated by semicolons.";
        p.exchanges.emplace_back(std::string(detail::kIdentifyExemplarUserEn),
                                 std::string(detail::kExtractExemplarAgentEn));
        p.final_user = "{text}";
        cat[p.template_name] = std::move(p);
    }
    {
        ChatPrompt p;
        p.template_name = "extract_ru";
        p.language = "ru";
        p.system =
            "Дан фрагмент текста. Вам задан вопрос: {question} Выделите конкретные языковые "
            "фрагменты, разделяя их точкой с запятой.";
        p.exchanges.emplace_back(std::string(detail::kIdentifyExemplarUserRu),
                                 std::string(detail::kExtractExemplarAgentRu));
        p.final_user = "{text}";
        cat[p.template_name] = std::move(p);
    }
    {
        ChatPrompt p;
        p.template_name = "mt_ru2en";
        p.language = "en";
        p.system = "Your task is to translate into English the given Russian text.";
        p.final_user = "{text}";
        cat[p.template_name] = std::move(p);
    }
    {
        ChatPrompt p;
        p.template_name = "mt_en2ru";
        p.language = "ru";
        p.system = "Ваша задача - перевести на русский язык данный английский текст.";
        p.final_user = "{text}";
        cat[p.template_name] = std::move(p);
    }
    return cat;
}

// .prompt file: sections introduced by marker lines @system, @user, @agent,
// @final_user, @prefix; section text is the lines up to the next marker with
// trailing blank lines dropped. @user/@agent alternate and pair up.
inline ChatPrompt parse_prompt_file(const std::string& content, const std::string& name,
                                    const std::string& language) {
    ChatPrompt p;
    p.template_name = name;
    p.language = language;

    std::vector<std::pair<std::string, std::vector<std::string>>> sections;
    for (const auto& line : split(content, '\n')) {
        if (!line.empty() && line[0] == '@') {
            sections.emplace_back(line, std::vector<std::string>{});
        } else if (!sections.empty()) {
            sections.back().second.push_back(line);
        } else if (!trim_view(line).empty()) {
            throw DataError("prompt file for '" + name + "': content before first @section");
        }
    }

    auto section_text = [](std::vector<std::string> lines) {
        while (!lines.empty() && trim_view(lines.back()).empty()) lines.pop_back();
        return join(lines, "\n");
    };

    std::string pending_user;
    bool have_pending_user = false;
    for (auto& [marker, lines] : sections) {
        std::string text = section_text(std::move(lines));
        if (marker == "@system") {
            p.system = text;
        } else if (marker == "@user") {
            if (have_pending_user)
                throw DataError("prompt file for '" + name + "': @user without @agent");
            pending_user = text;
            have_pending_user = true;
        } else if (marker == "@agent") {
            if (!have_pending_user)
                throw DataError("prompt file for '" + name + "': @agent without @user");
            p.exchanges.emplace_back(std::move(pending_user), std::move(text));
            have_pending_user = false;
        } else if (marker == "@final_user") {
            p.final_user = text;
        } else if (marker == "@prefix") {
            p.pre_generation_prefix = text;
        } else {
            throw DataError("prompt file for '" + name + "': unknown section '" + marker + "'");
        }
    }
    if (have_pending_user)
        throw DataError("prompt file for '" + name + "': @user without @agent");
    if (trim_view(p.system).empty())
        throw DataError("prompt file for '" + name + "': empty @system section");
    return p;
}

// Loads every <name>.prompt in the directory; the file name is the template
// name, language is derived from the builtin catalog entry when present or
// from an _ru suffix.
inline PromptCatalog load_prompt_catalog(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ConfigError("prompt catalog directory not found: " + dir);
    PromptCatalog builtin = builtin_prompt_catalog();
    PromptCatalog cat;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".prompt")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        std::string name = file.stem().string();
        std::string language = "en";
        if (auto it = builtin.find(name); it != builtin.end()) {
            language = it->second.language;
        } else if (name.size() >= 3 && name.substr(name.size() - 3) == "_ru") {
            language = "ru";
        }
        cat[name] = parse_prompt_file(read_file(file), name, language);
    }
    if (cat.empty()) throw ConfigError("prompt catalog directory has no .prompt files: " + dir);
    return cat;
}

inline void save_prompt_file(const std::filesystem::path& path, const ChatPrompt& p) {
    std::string out = "@system\n" + p.system + "\n";
    for (const auto& [user, agent] : p.exchanges) {
        out += "@user\n" + user + "\n@agent\n" + agent + "\n";
    }
    out += "@final_user\n" + p.final_user + "\n";
    if (!p.pre_generation_prefix.empty()) out += "@prefix\n" + p.pre_generation_prefix + "\n";
    atomic_write_file(path, out);
}

// Renders a catalog template: placeholder substitution over every text field.
inline ChatPrompt render_prompt(const PromptCatalog& catalog, const std::string& template_name,
                                const std::map<std::string, std::string>& vars) {
    auto it = catalog.find(template_name);
    if (it == catalog.end()) throw ConfigError("unknown prompt template '" + template_name + "'");
    ChatPrompt p = it->second;
    p.system = substitute_placeholders(p.system, vars);
    for (auto& [user, agent] : p.exchanges) {
        user = substitute_placeholders(user, vars);
        agent = substitute_placeholders(agent, vars);
    }
    p.final_user = substitute_placeholders(p.final_user, vars);
    p.pre_generation_prefix = substitute_placeholders(p.pre_generation_prefix, vars);
    return p;
}

}  // namespace pscan::gateway
