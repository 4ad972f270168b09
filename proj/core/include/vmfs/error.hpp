#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vmfs {

/// Base of every data-level failure raised by the library. The CLI maps these
/// to exit code 2; usage errors never derive from this type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed esxtop CSV. `line` is 1-based; `column` is 1-based or 0 when the
/// whole line is at fault.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) +
              (column ? ", column " + std::to_string(column) : std::string()) +
              ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class LabelsRequiredError : public Error {
 public:
  using Error::Error;
};

class InsufficientClassError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ModeError : public Error {
 public:
  using Error::Error;
};

class AttributeError : public Error {
 public:
  using Error::Error;
};

class TooFewPointsError : public Error {
 public:
  using Error::Error;
};

class DegenerateClusteringError : public Error {
 public:
  using Error::Error;
};

class PipelineError : public Error {
 public:
  using Error::Error;
};

}  // namespace vmfs
