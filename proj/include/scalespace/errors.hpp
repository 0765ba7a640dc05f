#pragma once

#include <stdexcept>
#include <string>

namespace scalespace {

/// Coarse failure categories, mapped one-to-one onto CLI exit codes.
enum class ErrorCategory {
    Usage = 1,     ///< bad flags / invalid configuration
    Input = 2,     ///< malformed or inconsistent input data
    Numerical = 3, ///< numerical breakdown (non-PD matrix, non-finite draw)
    Io = 4,        ///< filesystem failures
};

inline const char* to_string(ErrorCategory cat) {
    switch (cat) {
    case ErrorCategory::Usage: return "usage";
    case ErrorCategory::Input: return "input";
    case ErrorCategory::Numerical: return "numerical";
    case ErrorCategory::Io: return "io";
    }
    return "unknown";
}

/// All library failures surface as this exception. `code()` is a stable
/// machine-readable identifier (e.g. "NonMonotoneTimes"); `row()` is the
/// 1-based input line for parse errors, 0 elsewhere.
class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, std::string code, const std::string& message, long row = 0)
        : std::runtime_error(message), category_(category), code_(std::move(code)), row_(row) {}

    ErrorCategory category() const { return category_; }
    const std::string& code() const { return code_; }
    long row() const { return row_; }

private:
    ErrorCategory category_;
    std::string code_;
    long row_;
};

} // namespace scalespace
