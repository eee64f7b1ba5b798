#pragma once

#include <stdexcept>
#include <string>

namespace padicdiag {

enum class ErrorCode {
  InvalidArgument = 1,
  Precision = 2,
  DivisionByZero = 3,
  Domain = 4,
  Io = 5,
  Internal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Malformed input: bad prime, reducible polynomial, inconsistent config.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCode::InvalidArgument, what) {}
};

/// A result depends on digits beyond the working precision.
class PrecisionError : public Error {
 public:
  explicit PrecisionError(const std::string& what)
      : Error(ErrorCode::Precision, what) {}
};

class DivisionByZero : public Error {
 public:
  explicit DivisionByZero(const std::string& what)
      : Error(ErrorCode::DivisionByZero, what) {}
};

/// Mathematically undefined request (non-unit where a unit is needed,
/// element outside the subgroup, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCode::Domain, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what)
      : Error(ErrorCode::Internal, what) {}
};

}  // namespace padicdiag
