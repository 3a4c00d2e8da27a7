#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace bts {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: malformed config, violated precondition, unsupported layout.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message, std::string pointer = {})
        : Error(message), pointer_(std::move(pointer)) {}

    /// JSON pointer of the offending config field, empty when not applicable.
    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

/// Syntax error in a symbol expression, located by byte offset.
class SymbolSyntaxError : public ValidationError {
public:
    SymbolSyntaxError(const std::string& message, std::size_t offset)
        : ValidationError(message + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A precondition of a verified claim does not hold (e.g. essinf <= 0).
class HypothesisError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Base class for failures of the numerical pipeline.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Evaluation of a symbol produced a non-finite or undefined value.
class EvaluationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A matrix expected to be Hermitian positive definite is not, even after clamping.
class NotHpdError : public NumericalError {
public:
    NotHpdError(const std::string& message, double min_eigenvalue)
        : NumericalError(message), min_eigenvalue_(min_eigenvalue) {}

    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

}  // namespace bts
