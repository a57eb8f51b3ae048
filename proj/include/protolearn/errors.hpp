#pragma once

#include <stdexcept>
#include <string>

namespace protolearn {

// Base of every error this library raises on purpose. CLI exit codes are
// derived from the concrete type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Two observations disagree on the output for the same input prefix.
class NonDeterminismError : public Error {
public:
    using Error::Error;
};

class NotMinimalError : public Error {
public:
    using Error::Error;
};

class UnreachableStateError : public Error {
public:
    using Error::Error;
};

class InvalidCounterexample : public Error {
public:
    using Error::Error;
};

// Learning exceeded its round or generation budget.
class LearningFailure : public Error {
public:
    using Error::Error;
};

// Two runs with the same seed disagreed.
class DeterminismViolation : public Error {
public:
    using Error::Error;
};

}  // namespace protolearn
