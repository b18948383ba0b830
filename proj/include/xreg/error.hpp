#pragma once

#include <stdexcept>
#include <string>

namespace xreg {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller misuse: bad arguments, out-of-range hyperparameters. CLI exit code 2.
class UsageError : public Error {
public:
    using Error::Error;
};

// Bad input data or I/O failure. CLI exit code 1.
class DataError : public Error {
public:
    using Error::Error;
};

// Malformed text input, carries the 1-based line number.
class ParseError : public DataError {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& msg)
        : DataError(path + ":" + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

} // namespace xreg
