#pragma once

#include <stdexcept>
#include <string>

namespace dfadecomp {

enum class ErrorCode {
    // sample parsing
    MalformedHeader,
    MalformedInput,
    UnknownSymbol,
    ConflictingLabel,
    EmptyInput,
    // encoding
    EmptyAllocation,
    AllocationTooSmall,
    AllocationNotAscending,
    MalformedModel,
    // sat backend
    SolverUnusable,
    // search
    ArityMismatch,
    InvalidBound,
    BoundExceeded,
    // bench
    InsufficientWords,
    SearchSpaceTooLarge,
    // everything that signals a bug rather than bad input
    InvalidAutomaton,
    InternalInconsistency,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace dfadecomp
