#pragma once

#include <stdexcept>
#include <string>

namespace eec {

// Base of every error thrown by the library. The C API maps each subclass to
// one status code, so keep the hierarchy flat.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// A matrix that must be positive definite is not.
class SingularityError : public Error {
public:
    SingularityError(const std::string& what, double eigenvalue)
        : Error(what), eigenvalue_(eigenvalue) {}
    [[nodiscard]] double eigenvalue() const noexcept { return eigenvalue_; }

private:
    double eigenvalue_;
};

// Model construction rejected (degenerate spectral moments, invalid
// Schoenberg coefficients, non-PD conditional laws, ...).
class ModelError : public Error {
public:
    using Error::Error;
};

// Numerical failure at evaluation time (NaN integrand, factorization failure).
class NumericError : public Error {
public:
    using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

// Invalid run configuration. line == 0 when the problem is not tied to a line.
class ConfigError : public Error {
public:
    ConfigError(const std::string& field, int line, const std::string& message)
        : Error(format(field, line, message)), field_(field), line_(line), message_(message) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }
    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    static std::string format(const std::string& field, int line, const std::string& message)
    {
        std::string s = "config error";
        if (line > 0)
            s += " at line " + std::to_string(line);
        if (!field.empty())
            s += " [" + field + "]";
        return s + ": " + message;
    }

    std::string field_;
    int line_;
    std::string message_;
};

}  // namespace eec
