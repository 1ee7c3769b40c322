#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gu {

enum class ErrorCode {
    OutOfRange,
    ShapeMismatch,
    NonFinite,
    InvalidRatio,
    KindMismatch,
    EmptyRequest,
    MissingTarget,
    InvalidProbability,
    MissingLabels,
    NoEdges,
    InvalidK,
    CGDiverged,
    WrongBackbone,
    EmptySet,
    InsufficientCandidates,
    LengthMismatch,
    SingleClass,
    ParseError,
    UnknownMethod,
    UnsupportedCombination,
    IoError,
};

std::string_view error_code_name(ErrorCode code);

/// Process exit code for a failure class. Stable across releases so scripts
/// can dispatch on it.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code),
          message_(message) {}

    ErrorCode code() const { return code_; }
    const std::string& message() const { return message_; }

  private:
    ErrorCode code_;
    std::string message_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
    if (!condition) fail(code, message);
}

} // namespace gu
