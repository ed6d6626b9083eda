#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orthant {

enum class ErrorCode {
    NotSquare,
    NegativeEntry,
    NonzeroDiagonal,
    NormNotSubunit,
    NonFinite,
    ZeroDensity,
    NonpositiveHorizon,
    DensityMismatch,
    DimensionMismatch,
    MaxIterExceeded,
    StartOutsideOrthant,
    NonFiniteCoefficient,
    NotADivisor,
    InsufficientPaths,
    DegenerateInput,
    UnknownScenario,
    ConfigParse,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI's exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace orthant
