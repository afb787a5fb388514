#pragma once

#include <stdexcept>
#include <string>

namespace parasep {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition (shape, length, range).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Input grid cannot seed an interpolant (e.g. identically zero).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

class IllConditionedError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    using Error::Error;
};

class InvalidGeometryError : public Error {
public:
    using Error::Error;
};

class UnsupportedOracleError : public Error {
public:
    using Error::Error;
};

/// A matrix provider failed while assembling at `mu`.
class ProviderError : public Error {
public:
    ProviderError(double mu, const std::string& what)
        : Error("provider failed at mu = " + std::to_string(mu) + ": " + what), mu_(mu) {}

    double mu() const noexcept { return mu_; }

private:
    double mu_;
};

}  // namespace parasep
