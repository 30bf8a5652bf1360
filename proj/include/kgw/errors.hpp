#ifndef KGW_ERRORS_HPP
#define KGW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kgw {

// Base of everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration or unparseable input (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

// Mathematically valid request that leaves the numerical domain of an
// operation (CLI exit code 3).
struct DomainError : Error {
    using Error::Error;
};

struct BadConfig final : ConfigError {
    using ConfigError::ConfigError;
};

struct CsvParseError final : ConfigError {
    CsvParseError(const std::string& file, std::size_t line, const std::string& what)
        : ConfigError(file + ":" + std::to_string(line) + ": " + what), line_number(line) {}
    std::size_t line_number;
};

struct EmptyLattice final : DomainError {
    using DomainError::DomainError;
};

struct LatticeMismatch final : DomainError {
    using DomainError::DomainError;
};

struct NotPsd final : DomainError {
    using DomainError::DomainError;
};

struct DomainTooLarge final : DomainError {
    using DomainError::DomainError;
};

struct NotNormalized final : DomainError {
    using DomainError::DomainError;
};

struct TruncationTooSmall final : DomainError {
    using DomainError::DomainError;
};

struct OffShellSupport final : DomainError {
    using DomainError::DomainError;
};

struct DegenerateState final : DomainError {
    using DomainError::DomainError;
};

struct BadWeights final : DomainError {
    using DomainError::DomainError;
};

struct BadTemperature final : DomainError {
    using DomainError::DomainError;
};

struct BadFrame final : DomainError {
    using DomainError::DomainError;
};

struct NoConvergence final : DomainError {
    using DomainError::DomainError;
};

struct OffShell final : DomainError {
    using DomainError::DomainError;
};

// An internal consistency assertion failed (e.g. a value that must be real
// up to rounding came out with a large imaginary part).
struct NumericalConsistency final : DomainError {
    using DomainError::DomainError;
};

} // namespace kgw

#endif
