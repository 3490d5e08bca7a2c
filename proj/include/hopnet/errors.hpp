#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hopnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (bad file contents, empty lexicon,
/// size mismatches, out-of-range parameters).
class DataError : public Error {
public:
    using Error::Error;
};

/// Text that is not valid UTF-8. `offset()` is the byte offset of the first
/// undecodable byte.
class DecodeError : public DataError {
public:
    explicit DecodeError(std::size_t offset)
        : DataError("invalid UTF-8 at byte offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Invalid experiment configuration file.
class ConfigError : public DataError {
public:
    using DataError::DataError;
};

/// Failure reading or writing a file.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace hopnet
