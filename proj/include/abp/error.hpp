#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace abp {

enum class ErrorCode {
    ZeroOnContour,
    NoConvergence,
    DegenerateInput,
    BadBracket,
    PoleProximity,
    ClassViolation,
    OutOfDomain,
    Unfixable,
    ExistenceViolation,
    TruncationOverflow,
    IncompleteFiber,
    ParityViolation,
    EmptyRange,
    Stuck,
    NotHyperbolicEvidence,
    NotCantorCircle,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::ZeroOnContour: return "ZeroOnContour";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::BadBracket: return "BadBracket";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::ClassViolation: return "ClassViolation";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::Unfixable: return "Unfixable";
    case ErrorCode::ExistenceViolation: return "ExistenceViolation";
    case ErrorCode::TruncationOverflow: return "TruncationOverflow";
    case ErrorCode::IncompleteFiber: return "IncompleteFiber";
    case ErrorCode::ParityViolation: return "ParityViolation";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::Stuck: return "Stuck";
    case ErrorCode::NotHyperbolicEvidence: return "NotHyperbolicEvidence";
    case ErrorCode::NotCantorCircle: return "NotCantorCircle";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// True for failures of an iterative method, as opposed to bad input.
constexpr bool is_numerical_failure(ErrorCode code) noexcept {
    return code == ErrorCode::NoConvergence || code == ErrorCode::Stuck ||
           code == ErrorCode::IncompleteFiber || code == ErrorCode::TruncationOverflow ||
           code == ErrorCode::NotHyperbolicEvidence;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

} // namespace abp
