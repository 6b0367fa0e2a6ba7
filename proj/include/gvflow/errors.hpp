#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gvflow {

// Base of everything thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller broke an operation's precondition (mismatched sizes, bad index,
// invalid parameter, ...).
class ContractError : public Error {
public:
  using Error::Error;
};

// A lat/long point falls outside the grid bounding box. The message names the
// offending coordinate.
class OutOfDomainError : public Error {
public:
  using Error::Error;
};

// A distance metric was requested on a domain that cannot support it.
class UnsupportedMetricError : public Error {
public:
  using Error::Error;
};

// An iterative procedure hit its pass cap without reaching a fixpoint.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

// Malformed CSV input. Carries the 1-based line number and, when known, the
// column the failure was detected in.
class CsvError : public Error {
public:
  CsvError(const std::string& msg, std::size_t line, std::string column = "")
      : Error(msg), line_(line), column_(std::move(column)) {}

  std::size_t line() const { return line_; }
  const std::string& column() const { return column_; }

private:
  std::size_t line_;
  std::string column_;
};

// Malformed run config file.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Filesystem-level failure; the message carries the offending path.
class IoError : public Error {
public:
  using Error::Error;
};

// On-disk store exists but its format version is not one we read.
class StoreFormatError : public Error {
public:
  using Error::Error;
};

}  // namespace gvflow
