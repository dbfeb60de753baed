#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace setcast {

/// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition: bad argument, out-of-range option, malformed input.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed record in an input file. Carries the 1-based file line.
class DataError : public InvalidArgument {
 public:
  DataError(std::size_t line, std::string message, const std::string& source = {})
      : InvalidArgument((source.empty() ? "line " : source + ":") + std::to_string(line) + ": " + message),
        line_(line),
        message_(std::move(message)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::string message_;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A learner could not be fitted to its training data.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace setcast
