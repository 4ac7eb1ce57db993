#pragma once

#include <stdexcept>
#include <string>

namespace pierscour {

enum class ErrorKind {
  shape,
  domain,
  numeric,
  schema,
  parse,
  validation,
  config,
  io,
  divergence,
  undefined_correlation,
};

// Base of every error raised by the library. The kind is what the C API
// turns into a status code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define PIERSCOUR_DEFINE_ERROR(Name, Kind)                             \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& message) : Error(Kind, message) {} \
  };

PIERSCOUR_DEFINE_ERROR(ShapeError, ErrorKind::shape)
PIERSCOUR_DEFINE_ERROR(DomainError, ErrorKind::domain)
PIERSCOUR_DEFINE_ERROR(NumericError, ErrorKind::numeric)
PIERSCOUR_DEFINE_ERROR(SchemaError, ErrorKind::schema)
PIERSCOUR_DEFINE_ERROR(ParseError, ErrorKind::parse)
PIERSCOUR_DEFINE_ERROR(ValidationError, ErrorKind::validation)
PIERSCOUR_DEFINE_ERROR(ConfigError, ErrorKind::config)
PIERSCOUR_DEFINE_ERROR(IoError, ErrorKind::io)
PIERSCOUR_DEFINE_ERROR(DivergenceError, ErrorKind::divergence)
PIERSCOUR_DEFINE_ERROR(UndefinedCorrelationError,
                       ErrorKind::undefined_correlation)

#undef PIERSCOUR_DEFINE_ERROR

}  // namespace pierscour
