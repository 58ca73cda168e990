#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ita {

/// Base class of every error raised by the simulator.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SchedulingInPast : public Error {
public:
    using Error::Error;
};

class DuplicateLink : public Error {
public:
    using Error::Error;
};

class UnknownNode : public Error {
public:
    using Error::Error;
};

class UnknownLink : public Error {
public:
    using Error::Error;
};

class UnknownSeries : public Error {
public:
    using Error::Error;
};

class BadParams : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class EmptyDataset : public Error {
public:
    using Error::Error;
};

class DatasetExhausted : public Error {
public:
    using Error::Error;
};

/// A malformed dataset line. `field` is the 1-based column that failed.
class ParseError : public Error {
public:
    ParseError(std::size_t line_no, std::size_t field, const std::string& why)
        : Error("line " + std::to_string(line_no) + ", field " + std::to_string(field) + ": " + why),
          line_no_(line_no),
          field_(field) {}

    std::size_t line_no() const noexcept { return line_no_; }
    std::size_t field() const noexcept { return field_; }

private:
    std::size_t line_no_;
    std::size_t field_;
};

/// Invalid configuration. `key` is the dotted key path, e.g. "edge.buffer_storage".
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& why)
        : Error(key.empty() ? why : key + ": " + why), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace ita
