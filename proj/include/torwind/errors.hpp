#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace torwind {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position()` is the 0-based byte offset
/// into the source string where parsing failed.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Evaluation hit a pole (division by zero, log of a non-positive value,
/// sqrt of a negative, overflow). The message names the offending
/// sub-expression.
class EvalDomainError : public Error {
public:
    using Error::Error;
};

/// Inputs violate a precondition (non-closed curve, mismatched targets,
/// zero direction vector, bad configuration).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A computation failed numerically: quadrature did not converge, the
/// field vanishes on the curve, a Jacobian is singular, a Newton inverse
/// did not converge, a gradient system is not integrable.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure (unwritable output path).
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace torwind
