#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ballotlab {

enum class ErrorCode {
    InvalidDistribution,
    NotFiniteSupport,
    NonIntegerOrderWithoutAbsolute,
    SingleAtom,
    NotMeanZero,
    NotAcceptable,
    InvalidArgument,
    StateSpaceTooLarge,
    ZeroDenominator,
    ZeroDenominatorSample,
    TooLargeForExact,
    OffLattice,
    Overflow,
    InvalidG,
    NegativeMass,
    UnknownName,
    ParseError,
};

inline std::string_view error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidDistribution: return "InvalidDistribution";
        case ErrorCode::NotFiniteSupport: return "NotFiniteSupport";
        case ErrorCode::NonIntegerOrderWithoutAbsolute: return "NonIntegerOrderWithoutAbsolute";
        case ErrorCode::SingleAtom: return "SingleAtom";
        case ErrorCode::NotMeanZero: return "NotMeanZero";
        case ErrorCode::NotAcceptable: return "NotAcceptable";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
        case ErrorCode::ZeroDenominator: return "ZeroDenominator";
        case ErrorCode::ZeroDenominatorSample: return "ZeroDenominatorSample";
        case ErrorCode::TooLargeForExact: return "TooLargeForExact";
        case ErrorCode::OffLattice: return "OffLattice";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::InvalidG: return "InvalidG";
        case ErrorCode::NegativeMass: return "NegativeMass";
        case ErrorCode::UnknownName: return "UnknownName";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

// All library failures surface as this exception; code() identifies the kind.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ballotlab
