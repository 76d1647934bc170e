#pragma once

#include <stdexcept>
#include <string>

namespace rscm {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed arguments, files, or configuration supplied by the caller.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

// A statistic was requested from fewer samples than it is defined for.
class InsufficientSamplesError : public InvalidInputError {
public:
    using InvalidInputError::InvalidInputError;
};

// Numerical failure at runtime (singular factorization, degenerate
// optimization problem, estimation from degenerate data).
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace rscm
