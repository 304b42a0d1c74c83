#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pscan/detect/types.hpp"
#include "pscan/util/errors.hpp"
#include "pscan/util/io.hpp"

namespace pscan::detect {

namespace detail {

// Cell code: answer letter, ":NN" when confidence is present, "!tag" when
// the parse status was not clean. "T:70", "N!nf", "F:5!dup".
inline std::string status_tag(align::CellStatus s) {
    switch (s) {
        case align::CellStatus::ok: return "";
        case align::CellStatus::not_found: return "nf";
        case align::CellStatus::no_verdict: return "nv";
        case align::CellStatus::duplicate: return "dup";
    }
    return "";
}

inline align::CellStatus status_from_tag(std::string_view tag) {
    if (tag == "nf") return align::CellStatus::not_found;
    if (tag == "nv") return align::CellStatus::no_verdict;
    if (tag == "dup") return align::CellStatus::duplicate;
    throw DataError("unknown cell status tag '" + std::string(tag) + "'");
}

}  // namespace detail

inline std::string encode_cell_code(const align::AnswerCell& cell) {
    std::string code(1, align::answer_code(cell.answer));
    if (cell.confidence) code += ":" + std::to_string(*cell.confidence);
    auto tag = detail::status_tag(cell.status);
    if (!tag.empty()) code += "!" + tag;
    return code;
}

inline align::AnswerCell decode_cell_code(std::string_view code) {
    align::AnswerCell cell;
    auto bang = code.find('!');
    if (bang != std::string_view::npos) {
        cell.status = detail::status_from_tag(code.substr(bang + 1));
        code = code.substr(0, bang);
    }
    auto colon = code.find(':');
    if (colon != std::string_view::npos) {
        int conf = 0;
        for (char c : code.substr(colon + 1)) {
            if (c < '0' || c > '9') throw DataError("bad confidence in cell code");
            conf = conf * 10 + (c - '0');
            if (conf > 100) throw DataError("confidence out of range in cell code");
        }
        if (colon + 1 == code.size()) throw DataError("empty confidence in cell code");
        cell.confidence = conf;
        code = code.substr(0, colon);
    }
    if (code.size() != 1) throw DataError("bad answer code '" + std::string(code) + "'");
    switch (code[0]) {
        case 'T': cell.answer = align::Answer::True; break;
        case 'F': cell.answer = align::Answer::False; break;
        case 'N': cell.answer = align::Answer::NA; break;
        default: throw DataError("bad answer code '" + std::string(code) + "'");
    }
    if (cell.answer == align::Answer::NA && cell.confidence)
        throw DataError("NA cell cannot carry confidence");
    return cell;
}

inline nlohmann::json identify_row_to_json(const IdentifyResult& r) {
    nlohmann::json rec;
    rec["subject"] = r.ref.subject_id;
    rec["setting"] = std::string(corpus::to_string(r.ref.setting));
    rec["paragraph"] = r.ref.index;
    rec["language"] = std::string(corpus::to_string(r.prompt_language));
    auto& cells = rec["cells"] = nlohmann::json::object();
    for (const auto& [id, cell] : r.cells) cells[id] = encode_cell_code(cell);
    rec["retried"] = r.retried;
    rec["quarantined"] = r.quarantined;
    if (r.quarantined) rec["reason"] = r.reason;
    return rec;
}

inline IdentifyResult identify_row_from_json(const nlohmann::json& rec) {
    IdentifyResult r;
    r.ref.subject_id = rec.at("subject").get<std::string>();
    r.ref.setting = corpus::parse_setting(rec.at("setting").get<std::string>());
    r.ref.index = rec.at("paragraph").get<size_t>();
    r.prompt_language = rec.at("language").get<std::string>() == "ru" ? corpus::Language::ru
                                                                      : corpus::Language::en;
    for (const auto& [id, code] : rec.at("cells").items())
        r.cells[id] = decode_cell_code(code.get<std::string>());
    r.retried = rec.at("retried").get<bool>();
    r.quarantined = rec.at("quarantined").get<bool>();
    if (rec.contains("reason")) r.reason = rec.at("reason").get<std::string>();
    return r;
}

inline nlohmann::json pts_row_to_json(const PersuasiveTextSet& pts) {
    nlohmann::json rec;
    rec["subject"] = pts.ref.subject_id;
    rec["setting"] = std::string(corpus::to_string(pts.ref.setting));
    rec["paragraph"] = pts.ref.index;
    auto& spans = rec["spans"] = nlohmann::json::array();
    for (const auto& e : pts.entries) {
        nlohmann::json s;
        s["text"] = e.text;
        s["questions"] = e.question_ids;
        s["verbatim"] = e.verbatim;
        spans.push_back(std::move(s));
    }
    rec["flags"] = pts.flags;
    return rec;
}

inline PersuasiveTextSet pts_row_from_json(const nlohmann::json& rec) {
    PersuasiveTextSet pts;
    pts.ref.subject_id = rec.at("subject").get<std::string>();
    pts.ref.setting = corpus::parse_setting(rec.at("setting").get<std::string>());
    pts.ref.index = rec.at("paragraph").get<size_t>();
    for (const auto& s : rec.at("spans")) {
        PtsEntry e;
        e.text = s.at("text").get<std::string>();
        e.question_ids = s.at("questions").get<std::vector<std::string>>();
        e.verbatim = s.at("verbatim").get<bool>();
        pts.entries.push_back(std::move(e));
    }
    pts.flags = rec.at("flags").get<std::vector<std::string>>();
    return pts;
}

// Loads a line-delimited store, discarding a trailing line that was cut off
// mid-write (no final newline): the file is truncated back to the last
// complete record, so an interrupted run resumes from a clean prefix.
inline std::vector<nlohmann::json> load_jsonl_store(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    if (!fs::exists(path)) return {};
    std::string raw = read_file(path);
    if (!raw.empty() && raw.back() != '\n') {
        auto cut = raw.find_last_of('\n');
        raw = cut == std::string::npos ? std::string() : raw.substr(0, cut + 1);
        atomic_write_file(path, raw);
    }
    std::vector<nlohmann::json> rows;
    size_t start = 0;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '\n') continue;
        std::string_view line(raw.data() + start, i - start);
        start = i + 1;
        if (trim_view(line).empty()) continue;
        try {
            rows.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path.string() + ": bad store record: " + e.what());
        }
    }
    return rows;
}

// Append-only writer; one flushed line per record so a crash can lose at
// most the line being written.
class JsonlAppender {
   public:
    explicit JsonlAppender(const std::filesystem::path& path)
        : path_(path), out_(path, std::ios::binary | std::ios::app) {
        if (!out_) throw DataError("cannot open store for append: " + path.string());
    }

    void append(const nlohmann::json& rec) {
        out_ << rec.dump() << '\n';
        out_.flush();
        if (!out_) throw DataError("write failed on store: " + path_.string());
    }

   private:
    std::filesystem::path path_;
    std::ofstream out_;
};

}  // namespace pscan::detect
