#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace glap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (negative or
/// non-finite input, mismatched meshes, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A run configuration or a structural hypothesis on the data is violated.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A quadrature, root-finder or iteration failed to reach its tolerance.
class NumericError : public Error {
public:
    using Error::Error;
};

/// An iterative method hit its cap; carries the monitored history.
class NonConvergence : public NumericError {
public:
    NonConvergence(const std::string& what, std::vector<double> history)
        : NumericError(what), history_(std::move(history)) {}

    const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

/// A property that must hold for the computed objects was observed to fail.
class InvariantError : public Error {
public:
    using Error::Error;
};

}  // namespace glap
