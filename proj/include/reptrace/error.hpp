#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reptrace {

enum class ErrorCode {
    OutOfRange,
    NoEvidence,
    NoTerms,
    WeightSumZero,
    BadBin,
    NonBinaryRating,
    NumericalFailure,
    DegenerateMoments,
    NotDominant,
    Infeasible,
    MissingDiagnostics,
    NotPreferred,
    AmbiguousOrder,
    UnknownAgent,
    ConfigError,
    SchemaError,
    IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

    ErrorCode code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

}  // namespace reptrace
