#include "nearopt/error.hpp"

namespace nearopt {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DuplicateName: return "DuplicateName";
        case ErrorCode::UnknownVariable: return "UnknownVariable";
        case ErrorCode::InvalidBound: return "InvalidBound";
        case ErrorCode::MissingVariable: return "MissingVariable";
        case ErrorCode::NumericalFailure: return "NumericalFailure";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::NegativeEpsilon: return "NegativeEpsilon";
        case ErrorCode::NotOptimal: return "NotOptimal";
        case ErrorCode::NegativeOptimum: return "NegativeOptimum";
        case ErrorCode::InvalidDirection: return "InvalidDirection";
        case ErrorCode::UnboundedDirection: return "UnboundedDirection";
        case ErrorCode::EpsilonSpaceInfeasible: return "EpsilonSpaceInfeasible";
        case ErrorCode::IncomparableDirections: return "IncomparableDirections";
        case ErrorCode::InvalidGrid: return "InvalidGrid";
        case ErrorCode::DuplicateLabel: return "DuplicateLabel";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::UnknownLine: return "UnknownLine";
        case ErrorCode::UnknownTech: return "UnknownTech";
        case ErrorCode::EmptySubset: return "EmptySubset";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace nearopt
