#pragma once

#include <stdexcept>
#include <string>

namespace qdela {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Incompatible or malformed problem definition (domain/behaviour pairing, dimension).
class InvalidProblem : public Error {
public:
    using Error::Error;
};

class EmptyArchive : public Error {
public:
    using Error::Error;
};

/// Configuration error; line is 1-based, 0 when no source position applies.
class ConfigError : public Error {
public:
    ConfigError(const std::string& msg, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace qdela
