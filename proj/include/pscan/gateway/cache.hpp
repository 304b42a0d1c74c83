#pragma once

#include <atomic>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "pscan/util/digest.hpp"
#include "pscan/util/io.hpp"

namespace pscan::gateway {

// Content-addressed response store: one JSON file per cache key holding the
// rendered prompt, the decoding parameters, and the response text. Writes are
// atomic (write + rename) and serialized; the key is the file name, so a key
// can never map to two different responses within one store.
class CacheStore {
  public:
    explicit CacheStore(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    std::optional<std::string> get(const std::string& key) {
        std::filesystem::path file = path_for(key);
        if (!std::filesystem::exists(file)) return std::nullopt;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(read_file(file));
        } catch (const std::exception&) {
            return std::nullopt;  // partial or corrupt entry: treat as a miss
        }
        if (!rec.contains("response")) return std::nullopt;
        hits_.fetch_add(1, std::memory_order_relaxed);
        return rec.at("response").get<std::string>();
    }

    void put(const std::string& key, const std::string& prompt_bytes,
             const std::string& params_bytes, const std::string& response_text) {
        nlohmann::json rec;
        rec["prompt"] = prompt_bytes;
        rec["params"] = params_bytes;
        rec["response"] = response_text;
        std::lock_guard<std::mutex> lock(write_mutex_);
        atomic_write_file(path_for(key), rec.dump(2));
    }

    const std::filesystem::path& dir() const { return dir_; }
    uint64_t hit_count() const { return hits_.load(std::memory_order_relaxed); }

  private:
    std::filesystem::path path_for(const std::string& key) const { return dir_ / (key + ".json"); }

    std::filesystem::path dir_;
    std::mutex write_mutex_;
    std::atomic<uint64_t> hits_{0};
};

}  // namespace pscan::gateway
