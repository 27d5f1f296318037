#pragma once

#include <stdexcept>
#include <string>

namespace locflow {

/// Base for all errors raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data is missing, malformed, or violates a precondition.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A serialized model or artifact has the wrong schema or is corrupt.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A learner failed to produce a usable model.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace locflow
