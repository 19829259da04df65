#pragma once

#include <stdexcept>
#include <string>

namespace storelayout {

/// Base of every error raised by the library. Each subclass maps to one
/// failure family so callers (and the CLI) can react without string matching.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or unknown input: bad ids, missing fields, out-of-range values.
class InputError : public Error {
public:
    using Error::Error;
};

/// Text that could not be parsed. Carries the 1-based line when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Structurally valid input that violates a model rule (disconnected store,
/// infeasible eligibility, ...).
class ModelError : public Error {
public:
    using Error::Error;
};

/// A value (assignment, solution, plan) that fails a consistency check.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Problem too large for an exhaustive method.
class SizeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace storelayout
