#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aida {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: files, records, flags, schemas. CLI exit code 2.
class FormatError : public Error {
 public:
  explicit FormatError(std::string message) : Error(std::move(message)) {}
  FormatError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  // 0 when the error is not tied to a specific line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

// External annotation service trouble. CLI exit code 3.
class ServiceError : public Error {
 public:
  using Error::Error;
};

// Endpoint unreachable or HTTP status >= 400 after retries.
class TransportError : public ServiceError {
 public:
  using ServiceError::ServiceError;
};

// Response received but not parseable as the documented JSON.
class ProtocolError : public ServiceError {
 public:
  using ServiceError::ServiceError;
};

// Response parsed but content inconsistent (offset/surface mismatch).
class DataError : public ServiceError {
 public:
  using ServiceError::ServiceError;
};

// Batch annotation failure; carries the claim the backend failed on.
class AnnotateError : public ServiceError {
 public:
  AnnotateError(std::string claim_id, const std::string& message)
      : ServiceError("claim " + claim_id + ": " + message), claim_id_(std::move(claim_id)) {}

  const std::string& claim_id() const { return claim_id_; }

 private:
  std::string claim_id_;
};

}  // namespace aida
