#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace szegolab {

enum class ErrorCode {
    NotPositiveDefinite,
    InvalidCoefficient,
    ZeroLeadingCoefficient,
    NegativeDensity,
    NonpositiveDensity,
    TruncationUnstable,
    TruncationTooShort,
    InsufficientData,
    OutOfRange,
    InvalidModel,
    NoClosedForm,
    InvalidArgument,
    ParseError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::InvalidCoefficient: return "InvalidCoefficient";
    case ErrorCode::ZeroLeadingCoefficient: return "ZeroLeadingCoefficient";
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::NonpositiveDensity: return "NonpositiveDensity";
    case ErrorCode::TruncationUnstable: return "TruncationUnstable";
    case ErrorCode::TruncationTooShort: return "TruncationTooShort";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::NoClosedForm: return "NoClosedForm";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status and a machine-readable error object.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

    /// Input problems (bad files, bad model strings) versus numeric failures.
    bool is_input_error() const noexcept
    {
        return code_ == ErrorCode::ParseError || code_ == ErrorCode::InvalidModel ||
               code_ == ErrorCode::InvalidArgument || code_ == ErrorCode::OutOfRange;
    }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, what);
}

} // namespace szegolab
