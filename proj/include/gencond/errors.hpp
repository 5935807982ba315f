#pragma once

#include <stdexcept>
#include <string>

namespace gencond {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Formula or chart-file syntax error. Positions are 1-based; column counts
/// characters within the offending line (or within the formula string when
/// no file context exists, in which case line is 0).
class ParseError : public Error {
public:
    ParseError(std::string msg, int line, int column)
        : Error(format(msg, line, column)), line_(line), column_(column), reason_(std::move(msg)) {}

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& reason() const { return reason_; }

private:
    static std::string format(const std::string& msg, int line, int column) {
        if (line > 0)
            return "parse error at line " + std::to_string(line) + ", column "
                + std::to_string(column) + ": " + msg;
        return "parse error at column " + std::to_string(column) + ": " + msg;
    }
    int line_;
    int column_;
    std::string reason_;
};

/// Evaluation hit a point outside the domain of an elementary function
/// (division by zero, log or sqrt of a non-positive value). The message
/// quotes the offending subexpression.
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Metric failed the required signature test (Lorentzian or invertible).
class SignatureError : public Error {
public:
    using Error::Error;
};

/// Point lies outside a chart's declared region.
class RegionError : public Error {
public:
    using Error::Error;
};

/// A jet of insufficient order was passed to an operation that consumes
/// derivatives beyond what the jet carries.
class JetOrderError : public Error {
public:
    using Error::Error;
};

}  // namespace gencond
