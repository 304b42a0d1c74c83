#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pscan/corpus/labeled.hpp"
#include "pscan/util/errors.hpp"
#include "pscan/util/io.hpp"
#include "pscan/util/strings.hpp"

namespace pscan::align {

enum class Answer { True, False, NA };

inline char answer_code(Answer a) {
    switch (a) {
        case Answer::True: return 'T';
        case Answer::False: return 'F';
        case Answer::NA: return 'N';
    }
    return 'N';
}

// How a cell came to hold its value; NA cells distinguish "model said N/A"
// from "label never found" and "label found but verdict unreadable".
enum class CellStatus { ok, not_found, no_verdict, duplicate };

struct AnswerCell {
    Answer answer = Answer::NA;
    std::optional<int> confidence;  // never invented; absent when unparseable
    CellStatus status = CellStatus::ok;

    bool operator==(const AnswerCell&) const = default;
};

struct AnswerMatrix {
    std::vector<std::string> context_ids;
    std::vector<std::string> question_ids;
    std::vector<std::vector<AnswerCell>> cells;  // [context][question]
    std::vector<bool> gold;                      // aligned with context_ids

    size_t rows() const { return context_ids.size(); }
    size_t cols() const { return question_ids.size(); }

    void validate() const {
        if (cells.size() != context_ids.size() || gold.size() != context_ids.size())
            throw DataError("answer matrix dimensions do not match context list");
        for (const auto& row : cells)
            if (row.size() != question_ids.size())
                throw DataError("answer matrix row width does not match question list");
    }

    bool operator==(const AnswerMatrix&) const = default;
};

inline constexpr std::string_view kMatrixHeaderTag = "#questions";

inline void save_answer_matrix(const std::string& path, const AnswerMatrix& m) {
    m.validate();
    std::string out(kMatrixHeaderTag);
    for (const auto& qid : m.question_ids) {
        out += '\t';
        out += qid;
    }
    out += '\n';
    for (size_t r = 0; r < m.rows(); ++r) {
        out += m.context_ids[r];
        for (size_t c = 0; c < m.cols(); ++c) {
            const auto& cell = m.cells[r][c];
            out += '\t';
            out += m.question_ids[c];
            out += '=';
            out += answer_code(cell.answer);
            if (cell.confidence) {
                out += ':';
                out += std::to_string(*cell.confidence);
            }
        }
        out += '\n';
    }
    atomic_write_file(path, out);
}

// Gold labels are not persisted with the answers; they rejoin from the
// labeled dataset so the matrix file cannot drift from the corpus.
inline AnswerMatrix load_answer_matrix(const std::string& path,
                                       const std::vector<corpus::LabeledContext>& contexts) {
    std::map<std::string, bool> gold_by_id;
    for (const auto& ctx : contexts) gold_by_id[ctx.context_id] = corpus::collapse_to_binary(ctx);

    auto lines = read_lines(path);
    if (lines.empty()) throw DataError(path + ": empty answer matrix file");
    auto header = split(lines[0], '\t');
    if (header.empty() || header[0] != kMatrixHeaderTag)
        throw DataError(path + ": missing #questions header");

    AnswerMatrix m;
    m.question_ids.assign(header.begin() + 1, header.end());
    for (size_t li = 1; li < lines.size(); ++li) {
        if (trim_view(lines[li]).empty()) continue;
        auto cols = split(lines[li], '\t');
        if (cols.size() != m.question_ids.size() + 1)
            throw DataError(path + ": wrong cell count at line " + std::to_string(li + 1));
        auto git = gold_by_id.find(cols[0]);
        if (git == gold_by_id.end())
            throw DataError(path + ": context '" + cols[0] + "' not present in labeled dataset");
        m.context_ids.push_back(cols[0]);
        m.gold.push_back(git->second);
        std::vector<AnswerCell> row;
        for (size_t c = 0; c < m.question_ids.size(); ++c) {
            const auto& tok = cols[c + 1];
            auto eq = tok.find('=');
            if (eq == std::string::npos || tok.substr(0, eq) != m.question_ids[c])
                throw DataError(path + ": cell token '" + tok + "' does not match column '" +
                                m.question_ids[c] + "' at line " + std::to_string(li + 1));
            auto value = tok.substr(eq + 1);
            AnswerCell cell;
            auto colon = value.find(':');
            std::string code = value.substr(0, colon == std::string::npos ? value.size() : colon);
            if (code == "T") cell.answer = Answer::True;
            else if (code == "F") cell.answer = Answer::False;
            else if (code == "N") cell.answer = Answer::NA;
            else
                throw DataError(path + ": unknown answer code '" + code + "' at line " +
                                std::to_string(li + 1));
            if (colon != std::string::npos) {
                int conf = 0;
                try {
                    conf = std::stoi(value.substr(colon + 1));
                } catch (const std::exception&) {
                    throw DataError(path + ": bad confidence in '" + tok + "' at line " +
                                    std::to_string(li + 1));
                }
                if (conf < 0 || conf > 100)
                    throw DataError(path + ": confidence out of range in '" + tok + "'");
                cell.confidence = conf;
            }
            row.push_back(cell);
        }
        m.cells.push_back(std::move(row));
    }
    m.validate();
    return m;
}

}  // namespace pscan::align
