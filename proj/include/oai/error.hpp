#pragma once

#include <stdexcept>
#include <string>

namespace oai {

/// Root of every exception thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violated a domain-type invariant at construction.
class InvalidValue : public Error {
 public:
  using Error::Error;
};

class MalformedDate : public InvalidValue {
 public:
  using InvalidValue::InvalidValue;
};

/// Request-layer rejection. what() is the plain-text body of the 400 reply.
class SyntaxError : public Error {
 public:
  using Error::Error;
};

class SerializationError : public Error {
 public:
  using Error::Error;
};

class UnknownDcElement : public SerializationError {
 public:
  using SerializationError::SerializationError;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class VerbMismatch : public ParseError {
 public:
  using ParseError::ParseError;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class UnknownFormat : public Error {
 public:
  using Error::Error;
};

class BadResumptionToken : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  enum class Kind { RetriesExhausted, RedirectLoop, HttpError, ConnectionFailed };

  TransportError(Kind kind, std::string message, int status = 0)
      : Error(std::move(message)), kind_(kind), status_(status) {}

  Kind kind() const noexcept { return kind_; }
  /// HTTP status for Kind::HttpError, otherwise the last status seen (or 0).
  int status() const noexcept { return status_; }

 private:
  Kind kind_;
  int status_;
};

}  // namespace oai
