#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfs {

// Base of all library errors. `UsageError` subclasses map to CLI exit code 2,
// `DataError` subclasses to exit code 3, `SelfCheckFailed` to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch final : public UsageError {
 public:
  using UsageError::UsageError;
};

class RateOutOfRange final : public UsageError {
 public:
  using UsageError::UsageError;
};

class DimensionTooLarge final : public UsageError {
 public:
  using UsageError::UsageError;
};

class RegionError final : public UsageError {
 public:
  using UsageError::UsageError;
};

// Thrown by the analysis operations when q equals p; the solver itself
// handles this input by returning a flagged zero-strategy solution instead.
class DegenerateInput final : public UsageError {
 public:
  using UsageError::UsageError;
};

class PositivityViolation final : public DataError {
 public:
  PositivityViolation(std::string message, std::vector<std::size_t> categories)
      : DataError(std::move(message)), offending(std::move(categories)) {}
  std::vector<std::size_t> offending;
};

class SupportViolation final : public DataError {
 public:
  using DataError::DataError;
};

class InvariantViolation final : public DataError {
 public:
  using DataError::DataError;
};

class FeasibilityViolation final : public DataError {
 public:
  using DataError::DataError;
};

class InfeasibleU final : public DataError {
 public:
  using DataError::DataError;
};

class MalformedLine final : public DataError {
 public:
  MalformedLine(std::string message, std::size_t line)
      : DataError(std::move(message)), line_number(line) {}
  std::size_t line_number;
};

class UnknownGenre final : public DataError {
 public:
  using DataError::DataError;
};

class UnknownMovie final : public DataError {
 public:
  using DataError::DataError;
};

class PopulationDegenerate final : public DataError {
 public:
  using DataError::DataError;
};

class UserNotFound final : public DataError {
 public:
  using DataError::DataError;
};

class EmptyPopulation final : public DataError {
 public:
  using DataError::DataError;
};

class SelfCheckFailed final : public Error {
 public:
  using Error::Error;
};

}  // namespace pfs
