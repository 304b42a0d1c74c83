#pragma once

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pscan/corpus/paired.hpp"
#include "pscan/detect/extract.hpp"
#include "pscan/detect/identify.hpp"
#include "pscan/detect/store.hpp"
#include "pscan/detect/types.hpp"

namespace pscan::detect {

struct SettingStats {
    size_t paragraphs = 0;
    size_t cells = 0;
    size_t true_cells = 0;
    size_t retried = 0;
    size_t quarantined = 0;
    size_t pts_entries = 0;

    double true_rate() const {
        return cells == 0 ? 0.0 : static_cast<double>(true_cells) / static_cast<double>(cells);
    }
    double skip_rate() const { return 1.0 - true_rate(); }
};

struct RunStats {
    std::map<std::string, SettingStats> per_setting;  // keyed by setting name
    std::vector<std::string> quarantine;  // "subject/setting/index: reason"
    uint64_t provider_calls = 0;          // this process, not the whole store
    uint64_t cache_hits = 0;
};

struct PipelineHooks {
    // Runs after each paragraph's rows are durably appended. Throwing from
    // here aborts the run mid-stream, which is what the resume tests do.
    std::function<void(const ParagraphRef&)> after_paragraph_commit;
};

struct PipelineResult {
    RunStats stats;
    size_t paragraphs_total = 0;
    size_t paragraphs_resumed = 0;  // rows already complete on disk
    std::filesystem::path identify_store;
    std::filesystem::path pts_store;
    std::filesystem::path stats_path;
};

namespace detail {

struct Job {
    ParagraphRef ref;
    const corpus::Paragraph* para = nullptr;
};

// Canonical work order: subjects ascending, settings in declaration order
// (en, ru, en2ru, ru2en), paragraphs ascending. Store rows follow it.
inline std::vector<Job> plan_jobs(const std::vector<corpus::ArticlePair>& pairs) {
    std::vector<const corpus::ArticlePair*> sorted;
    sorted.reserve(pairs.size());
    for (const auto& p : pairs) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(),
              [](const corpus::ArticlePair* a, const corpus::ArticlePair* b) {
                  return a->subject_id < b->subject_id;
              });
    std::vector<Job> jobs;
    for (const auto* pair : sorted) {
        for (corpus::Setting s : corpus::kAllSettings) {
            const corpus::Article* art = pair->find(s);
            if (!art) continue;
            for (const auto& para : art->paragraphs)
                jobs.push_back({{pair->subject_id, s, para.index}, &para});
        }
    }
    return jobs;
}

inline std::string quarantine_line(const IdentifyResult& r) {
    return r.ref.key() + ": " + r.reason;
}

// The statistics artifact is a pure function of the two stores, so an
// interrupted-and-resumed run, a staged run, and a one-shot run all write
// the same bytes. Session-scoped counters (provider calls, cache hits,
// resumed-row counts) live on the in-memory result only.
inline nlohmann::json stats_to_json(const RunStats& stats, size_t total) {
    nlohmann::json rec;
    rec["paragraphs_total"] = total;
    auto& per = rec["settings"] = nlohmann::json::object();
    for (const auto& [name, s] : stats.per_setting) {
        nlohmann::json e;
        e["paragraphs"] = s.paragraphs;
        e["cells"] = s.cells;
        e["true_cells"] = s.true_cells;
        e["true_rate"] = s.true_rate();
        e["skip_rate"] = s.skip_rate();
        e["retried"] = s.retried;
        e["quarantined"] = s.quarantined;
        e["pts_entries"] = s.pts_entries;
        per[name] = std::move(e);
    }
    rec["quarantine"] = stats.quarantine;
    return rec;
}

}  // namespace detail

// Runs identify over every paragraph of every rendition, extraction over
// every True cell, and appends one identify row and one PTS row per
// paragraph to line-delimited stores under out_dir. Completed rows found on
// disk are never redone, so an interrupted run resumes where it stopped and
// converges on byte-identical stores. Statistics are recomputed from the
// full stores at the end, so they do not depend on where a run was cut.
inline PipelineResult run_pipeline(gateway::Gateway& gw, const gateway::PromptCatalog& catalog,
                                   const std::vector<corpus::ArticlePair>& pairs,
                                   const std::vector<hlq::HLQ>& active,
                                   const std::filesystem::path& out_dir,
                                   const DetectConfig& cfg = {},
                                   const PipelineHooks* hooks = nullptr) {
    namespace fs = std::filesystem;
    if (active.empty()) throw ConfigError("run_pipeline requires a non-empty question set");
    for (const auto& q : active)
        if (q.text_en.empty() || q.text_ru.empty())
            throw ConfigError("active question " + q.id + " is not bilingual");

    std::vector<hlq::HLQ> questions = active;
    std::sort(questions.begin(), questions.end(), [](const hlq::HLQ& a, const hlq::HLQ& b) {
        return align::question_id_less(a.id, b.id);
    });
    std::set<std::string> question_ids;
    for (const auto& q : questions) question_ids.insert(q.id);

    fs::create_directories(out_dir);
    PipelineResult out;
    out.identify_store = out_dir / "identify.jsonl";
    out.pts_store = out_dir / "pts.jsonl";
    out.stats_path = out_dir / "run_stats.json";

    const auto jobs = detail::plan_jobs(pairs);
    out.paragraphs_total = jobs.size();
    std::map<ParagraphRef, const corpus::Paragraph*> by_ref;
    for (const auto& j : jobs) by_ref[j.ref] = j.para;

    // Resume state. A paragraph is complete once both rows exist; an
    // identify row without its PTS row (crash between the two appends) is
    // reused rather than re-appended.
    std::map<ParagraphRef, IdentifyResult> identified;
    std::map<ParagraphRef, PersuasiveTextSet> collapsed;
    std::set<ParagraphRef> identify_on_disk;
    for (const auto& rec : load_jsonl_store(out.identify_store)) {
        auto r = identify_row_from_json(rec);
        if (!by_ref.count(r.ref))
            throw DataError("identify store has a row for unknown paragraph " + r.ref.key());
        std::set<std::string> seen;
        for (const auto& [id, cell] : r.cells) seen.insert(id);
        if (seen != question_ids)
            throw DataError("identify store answers a different question set at " +
                            r.ref.key());
        identify_on_disk.insert(r.ref);
        identified[r.ref] = std::move(r);
    }
    for (const auto& rec : load_jsonl_store(out.pts_store)) {
        auto p = pts_row_from_json(rec);
        if (!identified.count(p.ref))
            throw DataError("PTS store has a row without its identify row at " + p.ref.key());
        collapsed[p.ref] = std::move(p);
    }
    out.paragraphs_resumed = cfg.identify_only ? identify_on_disk.size() : collapsed.size();

    JsonlAppender identify_out(out.identify_store);
    JsonlAppender pts_out(out.pts_store);

    // First-pass identify prompts for everything incomplete, batched per
    // article so the gateway can overlap calls; commits stay in job order.
    size_t cursor = 0;
    while (cursor < jobs.size()) {
        size_t group_end = cursor;
        while (group_end < jobs.size() &&
               jobs[group_end].ref.subject_id == jobs[cursor].ref.subject_id &&
               jobs[group_end].ref.setting == jobs[cursor].ref.setting)
            ++group_end;

        std::vector<size_t> pending;
        std::vector<gateway::ChatPrompt> prompts;
        for (size_t i = cursor; i < group_end; ++i) {
            if (identified.count(jobs[i].ref)) continue;
            pending.push_back(i);
            prompts.push_back(render_identify_prompt(
                catalog, questions, *jobs[i].para,
                corpus::text_language(jobs[i].ref.setting)));
        }
        auto first_pass = gw.batch_complete(prompts);

        for (size_t k = 0; k < pending.size(); ++k) {
            const auto& job = jobs[pending[k]];
            IdentifyResult r;
            if (first_pass[k].ok) {
                r = resolve_identify_response(gw, catalog, job.ref, *job.para, questions,
                                              first_pass[k].record.response_text, cfg);
            } else {
                r = quarantined_identify(job.ref, questions,
                                         "provider failure: " + first_pass[k].error);
            }
            identified[job.ref] = std::move(r);
        }

        for (size_t i = cursor; i < group_end; ++i) {
            const auto& job = jobs[i];
            if (cfg.identify_only) {
                if (identify_on_disk.count(job.ref)) continue;
                identify_out.append(identify_row_to_json(identified.at(job.ref)));
                identify_on_disk.insert(job.ref);
                if (hooks && hooks->after_paragraph_commit)
                    hooks->after_paragraph_commit(job.ref);
                continue;
            }
            if (collapsed.count(job.ref)) continue;
            const IdentifyResult& idr = identified.at(job.ref);

            bool extraction_error = false;
            std::vector<ExtractionSpan> spans;
            std::vector<const hlq::HLQ*> true_qs;
            for (const auto& q : questions) {
                auto it = idr.cells.find(q.id);
                if (it != idr.cells.end() && cell_counts_as_true(it->second, cfg))
                    true_qs.push_back(&q);
            }
            std::vector<gateway::ChatPrompt> eprompts;
            eprompts.reserve(true_qs.size());
            for (const auto* q : true_qs)
                eprompts.push_back(render_extract_prompt(
                    catalog, *q, *job.para, corpus::text_language(job.ref.setting)));
            auto eresults = gw.batch_complete(eprompts);
            for (size_t k = 0; k < true_qs.size(); ++k) {
                if (!eresults[k].ok) {
                    extraction_error = true;
                    continue;
                }
                auto parsed = parse_extract_response(eresults[k].record.response_text,
                                                     true_qs[k]->id, job.para->text);
                spans.insert(spans.end(), parsed.spans.begin(), parsed.spans.end());
            }

            PersuasiveTextSet pts = collapse_to_pts(job.ref, std::move(spans), cfg);
            if (idr.quarantined) pts.flags.push_back("quarantined");
            if (extraction_error) pts.flags.push_back("extraction_error");
            if (!true_qs.empty() && pts.entries.empty() && !extraction_error)
                pts.flags.push_back("extraction_empty");

            // Commit unit: identify row then PTS row, each flushed. A row
            // already on disk from an interrupted run is not re-appended.
            if (!identify_on_disk.count(job.ref))
                identify_out.append(identify_row_to_json(idr));
            pts_out.append(pts_row_to_json(pts));
            collapsed[job.ref] = std::move(pts);

            if (hooks && hooks->after_paragraph_commit) hooks->after_paragraph_commit(job.ref);
        }
        cursor = group_end;
    }

    // Statistics over the complete stores. In identify-only mode there is
    // no PTS side yet, so those counters stay zero.
    for (const auto& job : jobs) {
        const auto& idr = identified.at(job.ref);
        auto& s = out.stats.per_setting[std::string(corpus::to_string(job.ref.setting))];
        s.paragraphs += 1;
        s.cells += idr.cells.size();
        for (const auto& [id, cell] : idr.cells)
            if (cell.answer == align::Answer::True) s.true_cells += 1;
        if (idr.retried) s.retried += 1;
        if (idr.quarantined) {
            s.quarantined += 1;
            out.stats.quarantine.push_back(detail::quarantine_line(idr));
        }
        auto cit = collapsed.find(job.ref);
        if (cit != collapsed.end()) s.pts_entries += cit->second.entries.size();
    }
    out.stats.provider_calls = gw.provider_calls();
    out.stats.cache_hits = gw.cache_hits();
    atomic_write_file(out.stats_path,
                      detail::stats_to_json(out.stats, out.paragraphs_total).dump(2) + "\n");
    return out;
}

}  // namespace pscan::detect
