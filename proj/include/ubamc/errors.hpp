#pragma once

#include <stdexcept>
#include <string>

namespace ubamc {

/// Base class of all workbench errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document. Carries the 1-based line and column.
class ParseError : public Error {
public:
    ParseError(std::string msg, int line, int column)
        : Error("parse error at " + std::to_string(line) + ":" +
                std::to_string(column) + ": " + msg),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// A stated precondition of an operation does not hold (ambiguous automaton
/// where unambiguity is required, alphabet mismatch, nondeterministic input
/// to a deterministic-only oracle, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An input or intermediate object exceeds a hard size limit.
class SizeLimitError : public Error {
public:
    using Error::Error;
};

/// An internal invariant failed; indicates a bug or corrupted input, never
/// a user mistake.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace ubamc
