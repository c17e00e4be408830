#pragma once

#include <stdexcept>
#include <string>

namespace normdyn {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A model or dynamics parameter is non-finite or outside its documented range.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

// A payoff matrix or vector has the wrong shape for the requested operation.
class DimensionError : public Error {
public:
    using Error::Error;
};

// An index (composition count, strategy index) lies outside its valid range.
class DomainError : public Error {
public:
    using Error::Error;
};

// A transition matrix is not row-stochastic or has negative entries.
class InvalidChain : public Error {
public:
    using Error::Error;
};

// The stationary linear system could not be solved.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace normdyn
