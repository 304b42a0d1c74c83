#pragma once

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "pscan/gateway/provider.hpp"
#include "pscan/util/errors.hpp"
#include "pscan/util/io.hpp"
#include "pscan/util/strings.hpp"

namespace pscan::cli {

// Full run configuration. Precedence: CLI flag > environment variable
// (PERSUASCAN_<SECTION>_<KEY>) > config file > built-in default. The
// credential itself is never part of this struct; only the name of the
// environment variable holding it is.
struct RunConfig {
    // [provider]
    gateway::ProviderConfig provider;

    // [paths] "builtin" selects the shipped question repository.
    std::string corpus;
    std::string labeled;
    std::string hlq_repo = "builtin";
    std::string overlay;
    std::string topics;
    std::string predictions;
    std::string prompts_dir;
    std::string output_dir = "out";
    std::string cache_dir;  // empty: <output_dir>/cache

    // [hlq]
    size_t dedup_ngram = 3;
    double dedup_threshold = 0.7;
    size_t select_k = 8;
    std::string encoding = "binary";  // binary | signed
    size_t forest_trees = 200;

    // [detect]
    bool retry_unparseable = true;
    int min_confidence = -1;  // -1 disables the optional threshold
    bool containment_collapse = false;

    // [analysis]
    double length_fraction = 1.0;
    std::string rank_kind = "pf";
    double rbo_p = 0.9;
    size_t min_topic_count = 50;
    std::string sweep_thresholds = "0,5,10,15,20,25,30,35,40,45,50,55,60,65,70,75,80,85,90,95,100";

    // [run] one master seed feeds the mock provider and the forest.
    uint64_t seed = 17;
    bool stage_translate = true;
    bool stage_identify = true;
    bool stage_extract = true;
    bool stage_metrics = true;
    bool stage_analyze = true;
};

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(where + ": expected a boolean, got '" + v + "'");
}

inline long long parse_int(const std::string& v, const std::string& where) {
    size_t used = 0;
    long long out = 0;
    try {
        out = std::stoll(v, &used);
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected an integer, got '" + v + "'");
    }
    if (used != v.size()) throw ConfigError(where + ": expected an integer, got '" + v + "'");
    return out;
}

inline double parse_real(const std::string& v, const std::string& where) {
    size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + v + "'");
    }
    if (used != v.size()) throw ConfigError(where + ": expected a number, got '" + v + "'");
    return out;
}

inline std::string render_real(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

struct ConfigKey {
    const char* section;
    const char* key;
    std::function<void(RunConfig&, const std::string&, const std::string&)> apply;
    std::function<std::string(const RunConfig&)> render;
};

inline const std::vector<ConfigKey>& config_keys() {
    using K = ConfigKey;
    static const std::vector<ConfigKey> keys = {
        K{"provider", "kind",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              if (v == "mock") c.provider.kind = gateway::ProviderKind::mock;
              else if (v == "remote") c.provider.kind = gateway::ProviderKind::remote_chat;
              else throw ConfigError(w + ": provider kind must be 'mock' or 'remote'");
          },
          [](const RunConfig& c) {
              return c.provider.kind == gateway::ProviderKind::mock ? "mock" : "remote";
          }},
        K{"provider", "model",
          [](RunConfig& c, const std::string& v, const std::string&) { c.provider.model_id = v; },
          [](const RunConfig& c) { return c.provider.model_id; }},
        K{"provider", "endpoint",
          [](RunConfig& c, const std::string& v, const std::string&) { c.provider.endpoint = v; },
          [](const RunConfig& c) { return c.provider.endpoint; }},
        K{"provider", "credential_env",
          [](RunConfig& c, const std::string& v, const std::string&) {
              c.provider.credential_env = v;
          },
          [](const RunConfig& c) { return c.provider.credential_env; }},
        K{"provider", "max_inflight",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.provider.max_inflight = static_cast<int>(parse_int(v, w));
          },
          [](const RunConfig& c) { return std::to_string(c.provider.max_inflight); }},
        K{"provider", "max_attempts",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.provider.retry.max_attempts = static_cast<int>(parse_int(v, w));
          },
          [](const RunConfig& c) { return std::to_string(c.provider.retry.max_attempts); }},
        K{"provider", "backoff_base_ms",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.provider.retry.backoff_base_ms = static_cast<int>(parse_int(v, w));
          },
          [](const RunConfig& c) { return std::to_string(c.provider.retry.backoff_base_ms); }},
        K{"provider", "temperature",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.provider.temperature = parse_real(v, w);
          },
          [](const RunConfig& c) { return render_real(c.provider.temperature); }},
        K{"provider", "timeout_sec",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.provider.timeout_sec = static_cast<int>(parse_int(v, w));
          },
          [](const RunConfig& c) { return std::to_string(c.provider.timeout_sec); }},
        K{"paths", "corpus",
          [](RunConfig& c, const std::string& v, const std::string&) { c.corpus = v; },
          [](const RunConfig& c) { return c.corpus; }},
        K{"paths", "labeled",
          [](RunConfig& c, const std::string& v, const std::string&) { c.labeled = v; },
          [](const RunConfig& c) { return c.labeled; }},
        K{"paths", "hlq_repo",
          [](RunConfig& c, const std::string& v, const std::string&) { c.hlq_repo = v; },
          [](const RunConfig& c) { return c.hlq_repo; }},
        K{"paths", "overlay",
          [](RunConfig& c, const std::string& v, const std::string&) { c.overlay = v; },
          [](const RunConfig& c) { return c.overlay; }},
        K{"paths", "topics",
          [](RunConfig& c, const std::string& v, const std::string&) { c.topics = v; },
          [](const RunConfig& c) { return c.topics; }},
        K{"paths", "predictions",
          [](RunConfig& c, const std::string& v, const std::string&) { c.predictions = v; },
          [](const RunConfig& c) { return c.predictions; }},
        K{"paths", "prompts_dir",
          [](RunConfig& c, const std::string& v, const std::string&) { c.prompts_dir = v; },
          [](const RunConfig& c) { return c.prompts_dir; }},
        K{"paths", "output_dir",
          [](RunConfig& c, const std::string& v, const std::string&) { c.output_dir = v; },
          [](const RunConfig& c) { return c.output_dir; }},
        K{"paths", "cache_dir",
          [](RunConfig& c, const std::string& v, const std::string&) { c.cache_dir = v; },
          [](const RunConfig& c) { return c.cache_dir; }},
        K{"hlq", "dedup_ngram",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.dedup_ngram = static_cast<size_t>(parse_int(v, w));
          },
          [](const RunConfig& c) { return std::to_string(c.dedup_ngram); }},
        K{"hlq", "dedup_threshold",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.dedup_threshold = parse_real(v, w);
          },
          [](const RunConfig& c) { return render_real(c.dedup_threshold); }},
        K{"hlq", "select_k",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.select_k = static_cast<size_t>(parse_int(v, w));
          },
          [](const RunConfig& c) { return std::to_string(c.select_k); }},
        K{"hlq", "encoding",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              if (v != "binary" && v != "signed")
                  throw ConfigError(w + ": encoding must be 'binary' or 'signed'");
              c.encoding = v;
          },
          [](const RunConfig& c) { return c.encoding; }},
        K{"hlq", "forest_trees",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.forest_trees = static_cast<size_t>(parse_int(v, w));
          },
          [](const RunConfig& c) { return std::to_string(c.forest_trees); }},
        K{"detect", "retry_unparseable",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.retry_unparseable = parse_bool(v, w);
          },
          [](const RunConfig& c) { return c.retry_unparseable ? "true" : "false"; }},
        K{"detect", "min_confidence",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.min_confidence = static_cast<int>(parse_int(v, w));
          },
          [](const RunConfig& c) { return std::to_string(c.min_confidence); }},
        K{"detect", "containment_collapse",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.containment_collapse = parse_bool(v, w);
          },
          [](const RunConfig& c) { return c.containment_collapse ? "true" : "false"; }},
        K{"analysis", "length_fraction",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.length_fraction = parse_real(v, w);
          },
          [](const RunConfig& c) { return render_real(c.length_fraction); }},
        K{"analysis", "rank_kind",
          [](RunConfig& c, const std::string& v, const std::string&) { c.rank_kind = v; },
          [](const RunConfig& c) { return c.rank_kind; }},
        K{"analysis", "rbo_p",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.rbo_p = parse_real(v, w);
          },
          [](const RunConfig& c) { return render_real(c.rbo_p); }},
        K{"analysis", "min_topic_count",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.min_topic_count = static_cast<size_t>(parse_int(v, w));
          },
          [](const RunConfig& c) { return std::to_string(c.min_topic_count); }},
        K{"analysis", "sweep_thresholds",
          [](RunConfig& c, const std::string& v, const std::string&) { c.sweep_thresholds = v; },
          [](const RunConfig& c) { return c.sweep_thresholds; }},
        K{"run", "seed",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.seed = static_cast<uint64_t>(parse_int(v, w));
          },
          [](const RunConfig& c) { return std::to_string(c.seed); }},
        K{"run", "translate",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.stage_translate = parse_bool(v, w);
          },
          [](const RunConfig& c) { return c.stage_translate ? "true" : "false"; }},
        K{"run", "identify",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.stage_identify = parse_bool(v, w);
          },
          [](const RunConfig& c) { return c.stage_identify ? "true" : "false"; }},
        K{"run", "extract",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.stage_extract = parse_bool(v, w);
          },
          [](const RunConfig& c) { return c.stage_extract ? "true" : "false"; }},
        K{"run", "metrics",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.stage_metrics = parse_bool(v, w);
          },
          [](const RunConfig& c) { return c.stage_metrics ? "true" : "false"; }},
        K{"run", "analyze",
          [](RunConfig& c, const std::string& v, const std::string& w) {
              c.stage_analyze = parse_bool(v, w);
          },
          [](const RunConfig& c) { return c.stage_analyze ? "true" : "false"; }},
    };
    return keys;
}

inline const ConfigKey* find_key(const std::string& section, const std::string& key) {
    for (const auto& k : config_keys())
        if (section == k.section && key == k.key) return &k;
    return nullptr;
}

}  // namespace detail

// Applies one "[section] key = value" triple; unknown names are errors so
// typos never silently fall back to defaults.
inline void apply_config_value(RunConfig& cfg, const std::string& section,
                               const std::string& key, const std::string& value,
                               const std::string& where) {
    const auto* k = detail::find_key(section, key);
    if (!k) throw ConfigError(where + ": unknown config key '" + section + "." + key + "'");
    k->apply(cfg, value, where);
}

inline void apply_config_file(RunConfig& cfg, const std::string& path) {
    const std::string body = read_file(path);
    std::string section;
    size_t pos = 0, line_no = 0;
    while (pos < body.size()) {
        size_t nl = body.find('\n', pos);
        std::string line = body.substr(pos, nl == std::string::npos ? nl : nl - pos);
        pos = nl == std::string::npos ? body.size() : nl + 1;
        ++line_no;
        const std::string where = path + ":" + std::to_string(line_no);
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3)
                throw ConfigError(where + ": malformed section header '" + t + "'");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value', got '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (section.empty())
            throw ConfigError(where + ": key '" + key + "' appears before any [section]");
        if (key.empty()) throw ConfigError(where + ": empty key");
        apply_config_value(cfg, section, key, value, where);
    }
}

// PERSUASCAN_<SECTION>_<KEY>, e.g. PERSUASCAN_PROVIDER_KIND. Key names
// contain underscores, so candidates are probed by exact name per key.
inline void apply_env_overrides(RunConfig& cfg) {
    for (const auto& k : detail::config_keys()) {
        std::string name = std::string("PERSUASCAN_") + k.section + "_" + k.key;
        for (auto& ch : name) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        const char* v = std::getenv(name.c_str());
        if (v) k.apply(cfg, v, "environment variable " + name);
    }
}

// Defaults, then the file (when given), then the environment. CLI flags are
// layered on top by the binary itself.
inline RunConfig load_run_config(const std::string& config_path, bool use_env = true) {
    RunConfig cfg;
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    if (use_env) apply_env_overrides(cfg);
    return cfg;
}

// The resolved configuration, one section per module, every key present.
inline std::string render_effective_config(const RunConfig& cfg) {
    std::string out;
    std::string section;
    for (const auto& k : detail::config_keys()) {
        if (section != k.section) {
            if (!out.empty()) out += '\n';
            section = k.section;
            out += "[" + section + "]\n";
        }
        out += std::string(k.key) + " = " + k.render(cfg) + "\n";
    }
    return out;
}

inline std::filesystem::path effective_cache_dir(const RunConfig& cfg) {
    if (!cfg.cache_dir.empty()) return cfg.cache_dir;
    return std::filesystem::path(cfg.output_dir) / "cache";
}

inline std::vector<int> parse_sweep_thresholds(const RunConfig& cfg) {
    std::vector<int> out;
    size_t pos = 0;
    const std::string& s = cfg.sweep_thresholds;
    while (pos <= s.size()) {
        size_t comma = s.find(',', pos);
        size_t end = comma == std::string::npos ? s.size() : comma;
        std::string piece = trim(s.substr(pos, end - pos));
        if (!piece.empty())
            out.push_back(static_cast<int>(
                detail::parse_int(piece, "analysis.sweep_thresholds")));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw ConfigError("analysis.sweep_thresholds lists no thresholds");
    return out;
}

}  // namespace pscan::cli
