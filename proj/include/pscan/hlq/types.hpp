#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "pscan/util/errors.hpp"
#include "pscan/util/io.hpp"
#include "pscan/util/strings.hpp"

namespace pscan::hlq {

struct HLQ {
    std::string id;  // "Q<number>"
    std::string text_en;
    std::string text_ru;  // empty until translated
    std::string source_technique;
    bool active = false;  // active questions must carry both language texts

    bool operator==(const HLQ&) const = default;
};

struct Provenance {
    std::string model_id;
    std::string generated;  // ISO date
    std::string seed;

    bool operator==(const Provenance&) const = default;
};

struct HLQRepository {
    std::vector<HLQ> questions;  // ordering is part of the contract
    Provenance provenance;

    const HLQ* find(const std::string& id) const {
        for (const auto& q : questions)
            if (q.id == id) return &q;
        return nullptr;
    }

    std::vector<HLQ> active_questions() const {
        std::vector<HLQ> out;
        for (const auto& q : questions)
            if (q.active) out.push_back(q);
        return out;
    }

    bool operator==(const HLQRepository&) const = default;
};

inline constexpr std::string_view kRepositoryHeader =
    "id\tactive\tsource_technique\ttext_en\ttext_ru";

inline void validate_repository(const HLQRepository& repo, const std::string& origin) {
    std::unordered_set<std::string> ids;
    for (const auto& q : repo.questions) {
        if (q.id.empty() || q.id[0] != 'Q')
            throw DataError(origin + ": question id '" + q.id + "' is not of the form Q<number>");
        if (!ids.insert(q.id).second)
            throw DataError(origin + ": duplicate question id '" + q.id + "'");
        if (trim_view(q.text_en).empty())
            throw DataError(origin + ": question '" + q.id + "' has empty English text");
        if (q.active && trim_view(q.text_ru).empty())
            throw DataError(origin + ": active question '" + q.id + "' is missing Russian text");
    }
}

inline void save_repository(const std::string& path, const HLQRepository& repo) {
    validate_repository(repo, path);
    std::string out;
    out += "# model_id: " + repo.provenance.model_id + "\n";
    out += "# generated: " + repo.provenance.generated + "\n";
    out += "# seed: " + repo.provenance.seed + "\n";
    out += std::string(kRepositoryHeader) + "\n";
    for (const auto& q : repo.questions) {
        out += q.id;
        out += '\t';
        out += q.active ? '1' : '0';
        out += '\t';
        out += q.source_technique;
        out += '\t';
        out += q.text_en;
        out += '\t';
        out += q.text_ru;
        out += '\n';
    }
    atomic_write_file(path, out);
}

inline HLQRepository load_repository(const std::string& path) {
    auto lines = read_lines(path);
    HLQRepository repo;
    size_t li = 0;
    for (; li < lines.size() && !lines[li].empty() && lines[li][0] == '#'; ++li) {
        auto body = trim(lines[li].substr(1));
        auto colon = body.find(':');
        if (colon == std::string::npos) continue;
        auto key = trim(body.substr(0, colon));
        auto value = trim(body.substr(colon + 1));
        if (key == "model_id") repo.provenance.model_id = value;
        else if (key == "generated") repo.provenance.generated = value;
        else if (key == "seed") repo.provenance.seed = value;
    }
    if (li >= lines.size() || trim_view(lines[li]) != kRepositoryHeader)
        throw DataError(path + ": missing repository header row");
    for (++li; li < lines.size(); ++li) {
        if (trim_view(lines[li]).empty()) continue;
        auto cols = split(lines[li], '\t');
        if (cols.size() != 5)
            throw DataError(path + ": malformed row at line " + std::to_string(li + 1));
        HLQ q;
        q.id = trim(cols[0]);
        auto flag = trim(cols[1]);
        if (flag != "0" && flag != "1")
            throw DataError(path + ": active flag must be 0 or 1 at line " + std::to_string(li + 1));
        q.active = flag == "1";
        q.source_technique = trim(cols[2]);
        q.text_en = cols[3];
        q.text_ru = cols[4];
        repo.questions.push_back(std::move(q));
    }
    validate_repository(repo, path);
    return repo;
}

// Post-edited Russian texts are kept in a separate overlay file so human edits
// stay versioned instead of silently mutating the generated repository.
inline constexpr std::string_view kOverlayHeader = "id\ttext_ru";

inline std::vector<std::pair<std::string, std::string>> load_translation_overlay(
    const std::string& path) {
    auto lines = read_lines(path);
    size_t li = 0;
    while (li < lines.size() && (trim_view(lines[li]).empty() || lines[li][0] == '#')) ++li;
    if (li >= lines.size() || trim_view(lines[li]) != kOverlayHeader)
        throw DataError(path + ": missing overlay header row");
    std::vector<std::pair<std::string, std::string>> entries;
    std::unordered_set<std::string> seen;
    for (++li; li < lines.size(); ++li) {
        if (trim_view(lines[li]).empty() || lines[li][0] == '#') continue;
        auto cols = split(lines[li], '\t');
        if (cols.size() != 2)
            throw DataError(path + ": malformed overlay row at line " + std::to_string(li + 1));
        auto id = trim(cols[0]);
        if (!seen.insert(id).second)
            throw DataError(path + ": duplicate overlay id '" + id + "'");
        entries.emplace_back(std::move(id), cols[1]);
    }
    return entries;
}

inline void apply_translation_overlay(
    HLQRepository& repo, const std::vector<std::pair<std::string, std::string>>& overlay) {
    for (const auto& [id, text_ru] : overlay) {
        bool found = false;
        for (auto& q : repo.questions) {
            if (q.id != id) continue;
            q.text_ru = text_ru;
            found = true;
            break;
        }
        if (!found) throw DataError("overlay names unknown question id '" + id + "'");
    }
}

}  // namespace pscan::hlq
