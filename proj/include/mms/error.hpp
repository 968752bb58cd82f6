#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mms {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Structural problems in an MMS table that prevent building any rows.
class MmsParseError : public Error {
public:
    using Error::Error;
};

class BvhError : public Error {
public:
    BvhError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Missing files/directories and unreadable or unwritable paths.
class IoError : public Error {
public:
    using Error::Error;
};

class DictionaryError : public Error {
public:
    using Error::Error;
};

class UnknownGlossError : public DictionaryError {
public:
    explicit UnknownGlossError(const std::string& gloss)
        : DictionaryError("unknown gloss: " + gloss), gloss_(gloss) {}

    const std::string& gloss() const noexcept { return gloss_; }

private:
    std::string gloss_;
};

class SkeletonError : public Error {
public:
    using Error::Error;
};

class ProfileError : public Error {
public:
    using Error::Error;
};

// Failure while realizing one row; carries the zero-based row index.
class RealizeError : public Error {
public:
    RealizeError(std::size_t row, const std::string& what)
        : Error("row " + std::to_string(row) + ": " + what), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

// Timing problems found while placing rows on the timeline.
class ScheduleError : public RealizeError {
public:
    using RealizeError::RealizeError;
};

}  // namespace mms
