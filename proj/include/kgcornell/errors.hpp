#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kgcornell {

enum class ErrorKind {
    InvalidCouplings,
    InvalidState,
    NegativeDiscriminant,
    NonPositiveOffset,
    NonPositiveTemperature,
    TruncationOverflow,
    NonPositivePartition,
    NonPositiveExponent,
    GammaDomain,
    QuadratureNonConvergence,
    OscillatorySeed,
    NumericalOverflow,
    InvalidProblem,
    NoSignChange,
    UsageError,
    ConfigParseError,
    IoError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidCouplings: return "InvalidCouplings";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorKind::NonPositiveOffset: return "NonPositiveOffset";
    case ErrorKind::NonPositiveTemperature: return "NonPositiveTemperature";
    case ErrorKind::TruncationOverflow: return "TruncationOverflow";
    case ErrorKind::NonPositivePartition: return "NonPositivePartition";
    case ErrorKind::NonPositiveExponent: return "NonPositiveExponent";
    case ErrorKind::GammaDomain: return "GammaDomain";
    case ErrorKind::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorKind::OscillatorySeed: return "OscillatorySeed";
    case ErrorKind::NumericalOverflow: return "NumericalOverflow";
    case ErrorKind::InvalidProblem: return "InvalidProblem";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::UsageError: return "UsageError";
    case ErrorKind::ConfigParseError: return "ConfigParseError";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

/// Exception carrying a machine-readable kind and, where meaningful, the
/// offending numeric value (a discriminant, an exponent, a cap...).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::optional<double> value = std::nullopt)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message)
        , kind_(kind)
        , message_(message)
        , value_(value)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<double> value() const noexcept { return value_; }
    /// Message without the kind prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
    std::optional<double> value_;
};

} // namespace kgcornell
