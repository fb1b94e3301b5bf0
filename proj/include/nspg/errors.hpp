#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nspg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Malformed structured input (JSONL, TSV, config, register maps).
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line = 0)
        : Error(line ? ("line " + std::to_string(line) + ": " + msg) : msg), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

// Input that is not valid UTF-8.
class DecodeError : public Error {
public:
    DecodeError(const std::string& msg, std::size_t byte_offset)
        : Error(msg + " at byte " + std::to_string(byte_offset)), byte_offset_(byte_offset) {}

    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_ = 0;
};

// Well-formed input that violates a documented constraint.
class ValidationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Transport or protocol failure talking to an external model adapter.
class AdapterError : public Error {
public:
    using Error::Error;
};

// A property that cannot be compiled into an assertion.
class GenerationError : public Error {
public:
    using Error::Error;
};

}  // namespace nspg
