#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nearopt {

/// Machine-readable failure categories shared by every module.
enum class ErrorCode {
    DuplicateName,
    UnknownVariable,
    InvalidBound,
    MissingVariable,
    NumericalFailure,
    TooLarge,
    NegativeEpsilon,
    NotOptimal,
    NegativeOptimum,
    InvalidDirection,
    UnboundedDirection,
    EpsilonSpaceInfeasible,
    IncomparableDirections,
    InvalidGrid,
    DuplicateLabel,
    InvalidConfig,
    UnknownNode,
    UnknownLine,
    UnknownTech,
    EmptySubset,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace nearopt
