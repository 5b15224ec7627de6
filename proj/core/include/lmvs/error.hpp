#pragma once

#include <stdexcept>
#include <string>

namespace lmvs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input that could not be parsed (interchange files, manifests,
/// checkpoints).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Parsed input that violates a data-model invariant. `field_path` names the
/// offending field, e.g. "frames[7].captions".
class ValidationError : public Error {
public:
    ValidationError(std::string field_path, const std::string& message)
        : Error(field_path.empty() ? message : field_path + ": " + message),
          field_path_(std::move(field_path)) {}

    const std::string& field_path() const noexcept { return field_path_; }

private:
    std::string field_path_;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Configuration values outside their allowed domain.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical failure at run time (non-finite loss, degenerate geometry).
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace lmvs
