#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace crossing {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (e.g. ‖z‖ > 1).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A model or run configuration is malformed.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A geometric series over γ was requested where ‖γ‖ < 1 does not hold.
class DivergentSeriesError : public Error {
public:
    using Error::Error;
};

class InsufficientOrderError : public Error {
public:
    using Error::Error;
};

/// The requested law has no evaluator for the operation.
class UnsupportedLawError : public Error {
public:
    using Error::Error;
};

class InversionError : public Error {
public:
    using Error::Error;
};

/// A tabulated distribution broke one of its structural invariants.
/// Carries the offending cells so callers can report them.
class ValidationError : public Error {
public:
    ValidationError(const std::string& what, std::vector<std::string> cells)
        : Error(what), cells_(std::move(cells)) {}

    [[nodiscard]] const std::vector<std::string>& cells() const noexcept { return cells_; }

private:
    std::vector<std::string> cells_;
};

/// Simulation exceeded its safety cap on observation epochs.
class RunawayError : public Error {
public:
    using Error::Error;
};

}  // namespace crossing
