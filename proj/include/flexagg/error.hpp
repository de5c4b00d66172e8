#pragma once

#include <stdexcept>
#include <string>

namespace flexagg {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A FeederSpec, config entry or argument violates its invariants.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class RejectionBudgetExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace flexagg
