#pragma once

#include <stdexcept>
#include <string>

namespace sls {

// Exception hierarchy. The CLI maps each family onto a stable exit code:
// ConfigError/UsageError/IoError -> 2, InputError/ValidationError -> 3,
// NumericalError -> 4.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

class UsageError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

class ValidationError : public Error {
  public:
    using Error::Error;
};

// Malformed caller data (wrong dimensions, non-finite logits, bad indices).
class InputError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
  public:
    ParseError(std::size_t line, const std::string& what)
        : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

class NumericalError : public Error {
  public:
    using Error::Error;
};

} // namespace sls
