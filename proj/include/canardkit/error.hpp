#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace canardkit {

enum class ErrorCode {
    // algebra
    ZeroDenominator,
    DivergentLimit,
    SeriesTruncation,
    PoleAtPoint,
    NotDivisible,
    // sysmodel
    SyntaxError,
    NonPolynomial,
    NotAffineInY,
    DegenerateFastEquation,
    MuDependentCriticalManifold,
    InvalidCriticalManifold,
    NoFold,
    // gspm / fcm
    InexactFold,
    NonlinearParameterEntry,
    UnremovableSingularity,
    ParameterUnsolvable,
    DerivativeMismatch,
    CurvatureIndexLimit,
    // numerics
    StiffnessFloor,
    NonFinite,
    NoOscillation,
    BadBracket,
    // misc
    InvalidArgument,
};

inline constexpr std::string_view code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::DivergentLimit: return "DivergentLimit";
    case ErrorCode::SeriesTruncation: return "SeriesTruncation";
    case ErrorCode::PoleAtPoint: return "PoleAtPoint";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::NonPolynomial: return "NonPolynomial";
    case ErrorCode::NotAffineInY: return "NotAffineInY";
    case ErrorCode::DegenerateFastEquation: return "DegenerateFastEquation";
    case ErrorCode::MuDependentCriticalManifold: return "MuDependentCriticalManifold";
    case ErrorCode::InvalidCriticalManifold: return "InvalidCriticalManifold";
    case ErrorCode::NoFold: return "NoFold";
    case ErrorCode::InexactFold: return "InexactFold";
    case ErrorCode::NonlinearParameterEntry: return "NonlinearParameterEntry";
    case ErrorCode::UnremovableSingularity: return "UnremovableSingularity";
    case ErrorCode::ParameterUnsolvable: return "ParameterUnsolvable";
    case ErrorCode::DerivativeMismatch: return "DerivativeMismatch";
    case ErrorCode::CurvatureIndexLimit: return "CurvatureIndexLimit";
    case ErrorCode::StiffnessFloor: return "StiffnessFloor";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NoOscillation: return "NoOscillation";
    case ErrorCode::BadBracket: return "BadBracket";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Numerical failures map to exit code 3 in the CLI, everything else to 2.
inline constexpr bool is_numeric_error(ErrorCode code) noexcept {
    return code == ErrorCode::StiffnessFloor || code == ErrorCode::NonFinite ||
           code == ErrorCode::NoOscillation || code == ErrorCode::BadBracket;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Syntax errors carry a 1-based source position.
class ParseError : public Error {
public:
    ParseError(ErrorCode code, const std::string& message, std::size_t line, std::size_t column)
        : Error(code, message + " at line " + std::to_string(line) + ", column " +
                          std::to_string(column)),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace canardkit
