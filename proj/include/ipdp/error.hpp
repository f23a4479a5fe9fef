#ifndef IPDP_ERROR_HPP_
#define IPDP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ipdp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration (alpha, grid size, quantile bounds, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Non-finite or otherwise inadmissible numeric input.
class InvalidValueError : public Error {
 public:
  using Error::Error;
};

class SchemaMismatchError : public Error {
 public:
  using Error::Error;
};

class EmptyStoreError : public Error {
 public:
  using Error::Error;
};

class OrderingError : public Error {
 public:
  using Error::Error;
};

// Raised while reading external data. Carries the 1-based line number of the
// offending row (0 when the header itself is broken) and the column name.
class IngestionError : public Error {
 public:
  IngestionError(const std::string& message, std::size_t row,
                 std::string column)
      : Error(message), row_(row), column_(std::move(column)) {}

  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

}  // namespace ipdp

#endif  // IPDP_ERROR_HPP_
