#pragma once

#include <stdexcept>
#include <string>

namespace tngp {

/// Machine-readable failure categories; the CLI maps these to exit codes.
enum class ErrorCode {
    domain,   // mathematical precondition violated (L <= 0, m < 1, ...)
    size,     // materialization cap or guard exceeded
    config,   // invalid configuration / rank chain / option value
    io,       // file system failure
    parse,    // malformed file contents
    numeric,  // factorization failure after all fallbacks
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }
    const char* code_name() const { return error_code_name(code_); }

private:
    ErrorCode code_;
};

/// Writes "warning: ..." to stderr. Non-fatal issues only (min-norm
/// fallbacks, inputs outside the hyperbox, degenerate scaling columns).
void warn(const std::string& message);

}  // namespace tngp
