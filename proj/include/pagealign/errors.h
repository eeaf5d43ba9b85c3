#pragma once

#include <stdexcept>
#include <string>

namespace pagealign {

// Base of every error the library raises. Validation failures derive from
// ValidationError so callers (the CLI) can map them to a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class MissingManifest : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SchemaViolation : public ValidationError {
 public:
  SchemaViolation(const std::string& field, const std::string& what)
      : ValidationError("schema violation at '" + field + "': " + what),
        field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class RasterDimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IndexGapError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DuplicateIndexError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IndexOutOfRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class RasterMissing : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pagealign
