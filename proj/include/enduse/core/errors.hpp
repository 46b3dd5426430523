#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace enduse {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV row, JSON document, timestamp).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Input that parsed fine but violates a data invariant (partial day, duplicate date).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// Estimator called on data it cannot estimate from.
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent configuration: bad partition, missing profile, missing wattage.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace enduse
