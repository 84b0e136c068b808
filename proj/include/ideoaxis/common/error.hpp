#pragma once

#include <stdexcept>
#include <string>

namespace ideoaxis {

// Base type for all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid or rejected configuration (unknown keys, missing paths, bad values).
class ConfigError : public Error {
public:
    using Error::Error;
};

// A caller violated an operation's documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Malformed input that could not be parsed; names the offending field.
class ParseError : public Error {
public:
    ParseError(const std::string& field, const std::string& detail)
        : Error("parse error at field '" + field + "': " + detail), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// HTTP/transport failure. retryable() distinguishes transient faults
// (connection reset, 5xx) from permanent ones (4xx).
class ApiError : public Error {
public:
    ApiError(const std::string& what, int status, std::string body_excerpt, bool retryable,
             int attempts = 0)
        : Error(what), status_(status), body_excerpt_(std::move(body_excerpt)),
          retryable_(retryable), attempts_(attempts) {}

    int status() const { return status_; }
    const std::string& body_excerpt() const { return body_excerpt_; }
    bool retryable() const { return retryable_; }
    int attempts() const { return attempts_; }

private:
    int status_;
    std::string body_excerpt_;
    bool retryable_;
    int attempts_;
};

// Stored artifact failed its content-hash verification.
class IntegrityError : public Error {
public:
    using Error::Error;
};

// Requested file or artifact does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

// Persisted data carries a schema version this build does not understand.
class SchemaVersionError : public Error {
public:
    using Error::Error;
};

// Vector dimensions or provider identities do not line up.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Reference axis anchors coincide; no direction can be formed.
class DegenerateAxisError : public Error {
public:
    using Error::Error;
};

// A pipeline stage was invoked before its upstream stage produced artifacts.
class StageOrderError : public Error {
public:
    StageOrderError(const std::string& what, std::string stage_to_run_first)
        : Error(what), stage_to_run_first_(std::move(stage_to_run_first)) {}
    const std::string& stage_to_run_first() const { return stage_to_run_first_; }

private:
    std::string stage_to_run_first_;
};

}  // namespace ideoaxis
