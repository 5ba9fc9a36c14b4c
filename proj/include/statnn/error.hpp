#pragma once

#include <stdexcept>
#include <string>

namespace statnn {

enum class ErrorCategory { config, io, numeric, sampling };

inline const char* category_name(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::config: return "config";
        case ErrorCategory::io: return "io";
        case ErrorCategory::numeric: return "numeric";
        case ErrorCategory::sampling: return "sampling";
    }
    return "unknown";
}

/// Library error with a machine-parsable category (used by the CLI for exit codes).
class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, const std::string& msg)
        : std::runtime_error(msg), cat_(cat) {}

    ErrorCategory category() const { return cat_; }

private:
    ErrorCategory cat_;
};

}  // namespace statnn
