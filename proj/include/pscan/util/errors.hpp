#pragma once

#include <stdexcept>
#include <string>

namespace pscan {

// Error taxonomy mirrored by CLI exit codes: config -> 1, data -> 2,
// provider -> 3.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class ProviderError : public std::runtime_error {
public:
    explicit ProviderError(const std::string& msg, int last_status = 0)
        : std::runtime_error(msg), last_status_(last_status) {}

    // Last transport status observed before giving up (HTTP code, or 0 when
    // the failure never reached the transport layer).
    int last_status() const { return last_status_; }

private:
    int last_status_;
};

}  // namespace pscan
