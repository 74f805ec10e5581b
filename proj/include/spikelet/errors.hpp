#pragma once

#include <stdexcept>
#include <string>

namespace spikelet {

// Error with a stable machine-parseable code. The CLI prints "error: <code>: <message>"
// on stderr and exits nonzero; library callers can switch on code().
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

namespace errcode {
inline constexpr const char* kConfig  = "E_CONFIG";   // bad or inconsistent configuration
inline constexpr const char* kFloor   = "E_FLOOR";    // stability/distinctness floor violated
inline constexpr const char* kRange   = "E_RANGE";    // argument out of range
inline constexpr const char* kIo      = "E_IO";       // file missing/unreadable/unwritable
inline constexpr const char* kFormat  = "E_FORMAT";   // malformed/truncated/unknown-version payload
inline constexpr const char* kNumeric = "E_NUMERIC";  // non-finite state or failed solve
inline constexpr const char* kGuard   = "E_GUARD";    // desk-scale guard exceeded
} // namespace errcode

} // namespace spikelet
