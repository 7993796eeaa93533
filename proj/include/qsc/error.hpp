#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsc {

/// Failure categories. Each one names the invariant that was violated.
enum class ErrorCode {
    NotSquare,
    NotHermitian,
    NotPSD,
    TraceNotOne,
    NotFinite,
    NotUnit,
    AmbientMismatch,
    DimensionMismatch,
    WrongDimension,
    WrongPartyCount,
    DuplicateLabel,
    EmptyEnsemble,
    InvalidProbabilities,
    InvalidPovm,
    CaseMismatch,
    PremiseViolation,
    MixedStateRemains,
    IterationLimit,
    BadParameter,
    ParseError,
};

inline std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::TraceNotOne: return "TraceNotOne";
    case ErrorCode::NotFinite: return "NotFinite";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::AmbientMismatch: return "AmbientMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::WrongPartyCount: return "WrongPartyCount";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::EmptyEnsemble: return "EmptyEnsemble";
    case ErrorCode::InvalidProbabilities: return "InvalidProbabilities";
    case ErrorCode::InvalidPovm: return "InvalidPovm";
    case ErrorCode::CaseMismatch: return "CaseMismatch";
    case ErrorCode::PremiseViolation: return "PremiseViolation";
    case ErrorCode::MixedStateRemains: return "MixedStateRemains";
    case ErrorCode::IterationLimit: return "IterationLimit";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what)
        , code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace qsc
