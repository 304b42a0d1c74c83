#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "pscan/gateway/cache.hpp"
#include "pscan/gateway/prompt.hpp"
#include "pscan/util/digest.hpp"
#include "pscan/util/errors.hpp"
#include "pscan/util/random.hpp"

namespace pscan::gateway {

enum class ProviderKind { remote_chat, mock };

inline std::string_view to_string(ProviderKind k) {
    return k == ProviderKind::remote_chat ? "remote_chat" : "mock";
}

struct RetryPolicy {
    int max_attempts = 3;
    int backoff_base_ms = 200;  // sleep base * 2^k between attempts
};

struct ProviderConfig {
    ProviderKind kind = ProviderKind::mock;
    std::string model_id = "mock-chat";
    std::string endpoint;  // base URL, remote_chat only
    std::string credential_env = "PERSUASCAN_API_KEY";
    int max_inflight = 4;
    RetryPolicy retry;
    double temperature = 0.0;
    uint64_t mock_seed = 17;  // mock only; not part of the cache key
    int timeout_sec = 120;
};

inline std::string decoding_params_bytes(const ProviderConfig& cfg) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "temperature=%.6g", cfg.temperature);
    return buf;
}

// Pure function of provider kind, model id, rendered prompt bytes, and
// decoding parameters. Template names, seeds, and endpoints are excluded.
inline std::string cache_key_for(const ProviderConfig& cfg, const ChatPrompt& rendered) {
    std::string blob;
    blob += "provider\n";
    blob += to_string(cfg.kind);
    blob += "\nmodel\n";
    blob += cfg.model_id;
    blob += "\nparams\n";
    blob += decoding_params_bytes(cfg);
    blob += "\nprompt\n";
    blob += rendered_bytes(rendered);
    return sha256_hex(blob);
}

class Provider {
  public:
    virtual ~Provider() = default;
    // Returns the full response text (pre-generation prefix included).
    virtual std::string complete(const ChatPrompt& rendered, const ProviderConfig& cfg) = 0;
};

// ---------------------------------------------------------------------------
// Mock provider: scripted rules first, then seeded canned answers in the
// correct output grammar for the template. Deterministic for a fixed seed.

struct MockRule {
    std::string template_name;  // empty matches any
    std::string user_contains;  // substring of final_user; empty matches any
    std::string response;
    bool fail = false;
    int fail_status = 503;
    int times = -1;  // -1 = unlimited
    int latency_ms = 0;
};

class MockProvider : public Provider {
  public:
    MockProvider() = default;

    void add_rule(MockRule rule) {
        std::lock_guard<std::mutex> lock(mutex_);
        rules_.push_back(std::move(rule));
    }

    std::string complete(const ChatPrompt& rendered, const ProviderConfig& cfg) override {
        int now = inflight_.fetch_add(1, std::memory_order_acq_rel) + 1;
        int peak = peak_inflight_.load(std::memory_order_relaxed);
        while (now > peak &&
               !peak_inflight_.compare_exchange_weak(peak, now, std::memory_order_acq_rel)) {
        }
        calls_.fetch_add(1, std::memory_order_relaxed);
        struct Exit {
            std::atomic<int>& counter;
            ~Exit() { counter.fetch_sub(1, std::memory_order_acq_rel); }
        } exit_guard{inflight_};

        if (auto rule = match_rule(rendered)) {
            if (rule->latency_ms > 0)
                std::this_thread::sleep_for(std::chrono::milliseconds(rule->latency_ms));
            if (rule->fail)
                throw ProviderError("scripted mock failure for template '" +
                                        rendered.template_name + "'",
                                    rule->fail_status);
            return rule->response;
        }
        return canned_answer(rendered, cfg);
    }

    int peak_inflight() const { return peak_inflight_.load(std::memory_order_relaxed); }
    uint64_t call_count() const { return calls_.load(std::memory_order_relaxed); }

  private:
    std::optional<MockRule> match_rule(const ChatPrompt& p) {
        std::lock_guard<std::mutex> lock(mutex_);
        for (auto& rule : rules_) {
            if (!rule.template_name.empty() && rule.template_name != p.template_name) continue;
            if (!rule.user_contains.empty() &&
                p.final_user.find(rule.user_contains) == std::string::npos)
                continue;
            if (rule.times == 0) continue;
            if (rule.times > 0) --rule.times;
            return rule;
        }
        return std::nullopt;
    }

    static bool is_alnum(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    }

    // Ordered question ids (digits after 'Q') found in the system text.
    static std::vector<std::string> scan_question_ids(const std::string& system) {
        std::vector<std::string> ids;
        for (size_t i = 0; i < system.size(); ++i) {
            if (system[i] != 'Q') continue;
            if (i > 0 && is_alnum(system[i - 1])) continue;
            size_t j = i + 1;
            while (j < system.size() && system[j] >= '0' && system[j] <= '9') ++j;
            if (j == i + 1 || j >= system.size() || system[j] != ':') continue;
            std::string id = system.substr(i, j - i);
            bool seen = false;
            for (const auto& known : ids) seen = seen || known == id;
            if (!seen) ids.push_back(id);
            i = j;
        }
        return ids;
    }

    std::string canned_answer(const ChatPrompt& p, const ProviderConfig& cfg) const {
        const std::string key = cache_key_for(cfg, p);
        const uint64_t base =
            fnv1a64(key) ^ (cfg.mock_seed * 0x9E3779B97F4A7C15ULL + 0x243F6A8885A308D3ULL);
        const std::string& name = p.template_name;

        if (name.rfind("identify", 0) == 0) return canned_identify(p, base);
        if (name.rfind("extract", 0) == 0) return canned_extract(p, base);
        if (name == "hlq_gen") return canned_hlq_gen(p, base);
        if (name == "mt_en2ru") return "[en2ru] " + p.final_user;
        if (name == "mt_ru2en") return "[ru2en] " + p.final_user;
        if (name == "baseline") return canned_baseline(base);

        char buf[32];
        std::snprintf(buf, sizeof(buf), "OK (%016llx)",
                      static_cast<unsigned long long>(base));
        return buf;
    }

    static std::string canned_identify(const ChatPrompt& p, uint64_t base) {
        auto ids = scan_question_ids(p.system);
        if (ids.empty()) ids = {"Q1"};
        std::string out;
        for (size_t k = 0; k < ids.size(); ++k) {
            uint64_t h = fnv1a64(ids[k]) ^ base;
            uint64_t roll = h % 100;
            int conf = static_cast<int>(50 + (h >> 8) % 51);
            if (k) out += "; ";
            out += ids[k];
            out += ": ";
            if (roll < 15) {
                out += "True (conf:" + std::to_string(conf) + ")";
            } else if (roll < 19) {
                out += "N/A";
            } else {
                out += "False (conf:" + std::to_string(conf) + ")";
            }
        }
        return out;
    }

    // Verbatim word-span snippets of the subject text, semicolon separated.
    static std::string canned_extract(const ChatPrompt& p, uint64_t base) {
        const std::string& text = p.final_user;
        std::vector<std::pair<size_t, size_t>> words;  // [begin, end)
        size_t i = 0;
        while (i < text.size()) {
            while (i < text.size() && is_space(text[i])) ++i;
            size_t j = i;
            while (j < text.size() && !is_space(text[j])) ++j;
            if (j > i) words.emplace_back(i, j);
            i = j;
        }
        if (words.empty()) return "";
        uint64_t h = base;
        if (h % 10 == 0) return "";  // occasionally: no instances found
        size_t span_count = 1 + h % 3;
        std::string out;
        for (size_t s = 0; s < span_count; ++s) {
            h = h * 6364136223846793005ULL + 1442695040888963407ULL;
            size_t start = h % words.size();
            size_t len = 2 + (h >> 17) % 3;
            size_t last = std::min(words.size() - 1, start + len - 1);
            std::string span =
                text.substr(words[start].first, words[last].second - words[start].first);
            if (!out.empty()) out += "; ";
            out += span;
        }
        return out;
    }

    static std::string canned_hlq_gen(const ChatPrompt& p, uint64_t base) {
        static const char* kAspects[] = {
            "use emotionally charged words",
            "attack a person instead of an argument",
            "appeal to an external authority",
            "cite popularity as proof",
            "invoke fear of a bad outcome",
            "present only two options",
            "oversimplify a cause",
            "divert attention from the main topic",
            "use a catchy slogan",
            "urge immediate action",
            "discourage further discussion",
            "repeat the same idea",
            "exaggerate the importance of something",
            "downplay the severity of events",
            "use vague or ambiguous wording",
            "use demeaning labels",
            "question someone's credibility",
            "associate a target with a disliked group",
            "accuse the target of hypocrisy",
            "attack the reputation of a source",
            "wave patriotic symbols or allegiance",
            "invoke shared moral values",
            "misrepresent an opposing position",
            "claim inevitable consequences",
            "use loaded rhetorical questions",
            "quote selectively to mislead",
            "present opinion as established fact",
            "use absolute terms like always or never",
            "appeal to tradition as justification",
            "shift blame to outsiders",
        };
        constexpr size_t kBank = sizeof(kAspects) / sizeof(kAspects[0]);
        Rng rng(base ^ fnv1a64(p.final_user));
        size_t count = 20 + rng.bounded(9);
        std::vector<size_t> order(kBank);
        for (size_t i = 0; i < kBank; ++i) order[i] = i;
        for (size_t i = kBank - 1; i > 0; --i) {
            size_t j = rng.bounded(i + 1);
            std::swap(order[i], order[j]);
        }
        count = std::min(count, kBank);
        std::string out;
        for (size_t i = 0; i < count; ++i) {
            if (i) out += "; ";
            out += "Does the text ";
            out += kAspects[order[i]];
            out += "?";
        }
        return out;
    }

    static std::string canned_baseline(uint64_t base) {
        static const char* kNames[] = {"Loaded_Language", "Doubt", "Name_Calling-Labeling",
                                       "Appeal_to_Fear-Prejudice", "Exaggeration-Minimisation"};
        uint64_t h = base;
        int conf = static_cast<int>(55 + (h >> 8) % 45);
        if (h % 100 < 60) return "None (conf:" + std::to_string(conf) + ")";
        std::string out = std::string(kNames[h % 5]) + " (conf:" + std::to_string(conf) + ")";
        if ((h >> 16) % 100 < 30) {
            out += "; ";
            out += kNames[(h >> 24) % 5];
            out += " (conf:" + std::to_string(static_cast<int>(50 + (h >> 32) % 50)) + ")";
        }
        return out;
    }

    std::mutex mutex_;
    std::vector<MockRule> rules_;
    std::atomic<int> inflight_{0};
    std::atomic<int> peak_inflight_{0};
    std::atomic<uint64_t> calls_{0};
};

// ---------------------------------------------------------------------------
// Remote chat-completion client (OpenAI-style POST /v1/chat/completions).
// Retries transport errors, 429, and 5xx with exponential backoff; other
// statuses fail immediately. The credential is read from the environment and
// never logged or cached.

class RemoteChatProvider : public Provider {
  public:
    std::string complete(const ChatPrompt& rendered, const ProviderConfig& cfg) override {
        if (cfg.endpoint.empty()) throw ConfigError("remote provider requires an endpoint");
        const char* cred = std::getenv(cfg.credential_env.c_str());
        if (cred == nullptr || *cred == '\0')
            throw ConfigError("credential environment variable '" + cfg.credential_env +
                              "' is not set");

        nlohmann::json body;
        body["model"] = cfg.model_id;
        body["temperature"] = cfg.temperature;
        auto& messages = body["messages"] = nlohmann::json::array();
        messages.push_back({{"role", "system"}, {"content", rendered.system}});
        for (const auto& [user, agent] : rendered.exchanges) {
            messages.push_back({{"role", "user"}, {"content", user}});
            messages.push_back({{"role", "assistant"}, {"content", agent}});
        }
        messages.push_back({{"role", "user"}, {"content", rendered.final_user}});
        if (!rendered.pre_generation_prefix.empty())
            messages.push_back(
                {{"role", "assistant"}, {"content", rendered.pre_generation_prefix}});
        const std::string payload = body.dump();

        const httplib::Headers headers = {
            {"Authorization", std::string("Bearer ") + cred},
        };

        int last_status = 0;
        std::string last_error;
        for (int attempt = 0; attempt < cfg.retry.max_attempts; ++attempt) {
            if (attempt > 0) {
                auto delay = std::chrono::milliseconds(
                    static_cast<long long>(cfg.retry.backoff_base_ms) << (attempt - 1));
                std::this_thread::sleep_for(delay);
            }
            httplib::Client client(cfg.endpoint);
            client.set_connection_timeout(cfg.timeout_sec, 0);
            client.set_read_timeout(cfg.timeout_sec, 0);
            client.set_write_timeout(cfg.timeout_sec, 0);

            auto res = client.Post("/v1/chat/completions", headers, payload, "application/json");
            if (!res) {
                last_status = 0;
                last_error = "transport error (" + to_string(res.error()) + ")";
                continue;
            }
            last_status = res->status;
            if (res->status == 200) {
                try {
                    auto parsed = nlohmann::json::parse(res->body);
                    std::string content = parsed.at("choices").at(0).at("message").at("content")
                                              .get<std::string>();
                    return rendered.pre_generation_prefix + content;
                } catch (const std::exception& e) {
                    last_error = std::string("unparseable provider response: ") + e.what();
                    continue;
                }
            }
            if (res->status == 429 || res->status >= 500) {
                last_error = "HTTP " + std::to_string(res->status);
                continue;
            }
            throw ProviderError("provider rejected request with HTTP " +
                                    std::to_string(res->status),
                                res->status);
        }
        throw ProviderError("provider request failed after " +
                                std::to_string(cfg.retry.max_attempts) + " attempts: " +
                                last_error,
                            last_status);
    }

  private:
    static std::string to_string(httplib::Error err) {
        return std::string(httplib::to_string(err));
    }
};

inline std::shared_ptr<Provider> make_provider(const ProviderConfig& cfg) {
    if (cfg.kind == ProviderKind::mock) return std::make_shared<MockProvider>();
    return std::make_shared<RemoteChatProvider>();
}

// ---------------------------------------------------------------------------
// Gateway: cache in front of a provider, a hard concurrency bound, and
// single-flight deduplication so one cache key never produces two different
// responses within a store.

struct CompletionRecord {
    std::string cache_key;
    std::string response_text;
    int latency_ms = 0;
    bool retrieved_from_cache = false;
};

struct BatchResult {
    bool ok = false;
    CompletionRecord record;
    std::string error;
    int error_status = 0;
};

class Gateway {
  public:
    Gateway(std::shared_ptr<Provider> provider, ProviderConfig cfg, std::string cache_dir)
        : provider_(std::move(provider)),
          cfg_(std::move(cfg)),
          cache_(std::move(cache_dir)),
          semaphore_(std::clamp(cfg_.max_inflight, 1, kMaxInflightBound)) {
        if (cfg_.max_inflight < 1 || cfg_.max_inflight > kMaxInflightBound)
            throw ConfigError("max_inflight must be in [1, " +
                              std::to_string(kMaxInflightBound) + "]");
    }

    const ProviderConfig& config() const { return cfg_; }
    CacheStore& cache() { return cache_; }
    uint64_t provider_calls() const { return provider_calls_.load(std::memory_order_relaxed); }
    uint64_t cache_hits() const { return cache_.hit_count(); }

    CompletionRecord complete(const ChatPrompt& rendered) {
        const std::string key = cache_key_for(cfg_, rendered);
        if (auto hit = cache_.get(key)) {
            return CompletionRecord{key, *hit, 0, true};
        }

        std::shared_future<std::string> future;
        bool leader = false;
        {
            std::lock_guard<std::mutex> lock(inflight_mutex_);
            auto it = inflight_.find(key);
            if (it != inflight_.end()) {
                future = it->second;
            } else {
                std::promise<std::string> promise;
                future = promise.get_future().share();
                inflight_.emplace(key, future);
                leader_promises_[key] = std::move(promise);
                leader = true;
            }
        }

        if (!leader) {
            // Another thread is fetching this key; share its result.
            return CompletionRecord{key, future.get(), 0, true};
        }

        std::string text;
        try {
            auto t0 = std::chrono::steady_clock::now();
            {
                semaphore_.acquire();
                struct Release {
                    std::counting_semaphore<kMaxInflightBound>& sem;
                    ~Release() { sem.release(); }
                } release{semaphore_};
                text = provider_->complete(rendered, cfg_);
            }
            auto t1 = std::chrono::steady_clock::now();
            provider_calls_.fetch_add(1, std::memory_order_relaxed);
            cache_.put(key, rendered_bytes(rendered), decoding_params_bytes(cfg_), text);
            int ms = static_cast<int>(
                std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
            settle(key, text, nullptr);
            return CompletionRecord{key, text, ms, false};
        } catch (...) {
            settle(key, "", std::current_exception());
            throw;
        }
    }

    std::vector<BatchResult> batch_complete(const std::vector<ChatPrompt>& prompts) {
        std::vector<BatchResult> results(prompts.size());
        if (prompts.empty()) return results;
        std::atomic<size_t> next{0};
        size_t worker_count =
            std::min(prompts.size(), static_cast<size_t>(std::max(1, cfg_.max_inflight)));
        std::vector<std::thread> workers;
        workers.reserve(worker_count);
        for (size_t w = 0; w < worker_count; ++w) {
            workers.emplace_back([&] {
                for (;;) {
                    size_t i = next.fetch_add(1, std::memory_order_relaxed);
                    if (i >= prompts.size()) return;
                    try {
                        results[i].record = complete(prompts[i]);
                        results[i].ok = true;
                    } catch (const ProviderError& e) {
                        results[i].error = e.what();
                        results[i].error_status = e.last_status();
                    } catch (const std::exception& e) {
                        results[i].error = e.what();
                    }
                }
            });
        }
        for (auto& t : workers) t.join();
        return results;
    }

  private:
    static constexpr int kMaxInflightBound = 4096;

    void settle(const std::string& key, const std::string& value, std::exception_ptr error) {
        std::promise<std::string> promise;
        {
            std::lock_guard<std::mutex> lock(inflight_mutex_);
            auto it = leader_promises_.find(key);
            promise = std::move(it->second);
            leader_promises_.erase(it);
            inflight_.erase(key);
        }
        if (error) {
            promise.set_exception(error);
        } else {
            promise.set_value(value);
        }
    }

    std::shared_ptr<Provider> provider_;
    ProviderConfig cfg_;
    CacheStore cache_;
    std::counting_semaphore<kMaxInflightBound> semaphore_;
    std::mutex inflight_mutex_;
    std::unordered_map<std::string, std::shared_future<std::string>> inflight_;
    std::unordered_map<std::string, std::promise<std::string>> leader_promises_;
    std::atomic<uint64_t> provider_calls_{0};
};

}  // namespace pscan::gateway
