#pragma once

#include <stdexcept>
#include <string>

namespace discenv {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation failed to produce a trustworthy number (non-convergence,
/// contour too close to a zero, infeasible family, ...).
class NumericError : public Error {
public:
    using Error::Error;
};

/// Input data violates a documented precondition or schema.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& message)
        : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace discenv
