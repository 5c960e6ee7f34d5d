#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace monodyn {

/// Broad error families. The CLI maps these onto exit codes.
enum class ErrorKind {
  Schema,        // malformed input data
  Precondition,  // input is well formed but violates an operation's requirement
  Inconclusive,  // iteration or enumeration cap reached before a verdict
  Internal,      // a verified postcondition failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& what)
      : std::runtime_error(what), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Short machine-readable tag such as "not_stable" or "term_blowup".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(ErrorKind::Schema, "schema", what) {}
};

class PreconditionError : public Error {
 public:
  PreconditionError(std::string code, const std::string& what)
      : Error(ErrorKind::Precondition, std::move(code), what) {}
};

class InconclusiveError : public Error {
 public:
  InconclusiveError(std::string code, const std::string& what)
      : Error(ErrorKind::Inconclusive, std::move(code), what) {}
};

class InternalError : public Error {
 public:
  InternalError(std::string code, const std::string& what)
      : Error(ErrorKind::Internal, std::move(code), what) {}
};

}  // namespace monodyn
