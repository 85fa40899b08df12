#pragma once

#include <stdexcept>
#include <string>

namespace evperm {

// Base for every error raised by the library. Callers that only care about
// "something was wrong with the request" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside its documented domain (empty sample, NaN, alpha not in (0,1), ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

// Full permutation enumeration requested above the configured cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

// A window or index does not fit inside the available series.
class RangeError : public Error {
public:
    using Error::Error;
};

// Malformed text input. line() is 1-based; 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Well-formed input that violates a semantic constraint (unsorted dates, bad config value).
class ValidationError : public Error {
public:
    using Error::Error;
};

// The t-statistic is undefined because both spot variances are zero.
class DegenerateStatistic : public Error {
public:
    using Error::Error;
};

}  // namespace evperm
