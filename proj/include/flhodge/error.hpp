#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flh {

enum class ErrorCode {
    NotPrime,
    PrecisionZero,
    PrecisionTooLarge,
    ContextMismatch,
    NotAUnit,
    NotDivisible,
    ShapeMismatch,
    LengthMismatch,
    SpanMismatch,
    InsufficientPrecision,
    SingularPhi,
    NonRationalCoefficients,
    PVanishesAtOne,
    NotExact,
    LiftFailure,
    PrecisionLoss,
    NotFree,
    InvalidInput,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Precision-related failures share an exit code in the CLI.
inline bool is_precision_error(ErrorCode code) {
    return code == ErrorCode::InsufficientPrecision || code == ErrorCode::PrecisionLoss;
}

}  // namespace flh
