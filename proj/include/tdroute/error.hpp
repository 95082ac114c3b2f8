#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tdroute {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ContractViolation : public Error {
 public:
  using Error::Error;
};

class EmptyStore : public Error {
 public:
  EmptyStore() : Error("priority store is empty") {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Domain outcomes a caller may recover from (CLI exit code 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

class NoPath : public DomainError {
 public:
  using DomainError::DomainError;
};

class ZoneMiss : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoZone : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoSolution : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace tdroute
