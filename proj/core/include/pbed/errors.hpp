#pragma once

#include <stdexcept>
#include <string>

namespace pbed {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input file could not be parsed. `kind()` identifies the specific defect.
class ParseError : public Error {
public:
    enum class Kind {
        MalformedHeader,
        NonNumericCell,
        NonUniformGrid,
        DimensionMismatch,
        FileNotFound,
    };

    ParseError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// A precondition on operation arguments was violated.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

/// Run configuration is inconsistent or out of range.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// A numerical procedure failed (step-size collapse, blow-up, degenerate data).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

}  // namespace pbed
