#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace nlof {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text; carries the 1-based physical line number.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " at line " + std::to_string(line)), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class DuplicateIdError : public Error {
public:
  using Error::Error;
};

/// A numeric argument outside the operation's domain.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Structural problem in a topology or scenario description.
class ValidationError : public Error {
public:
  using Error::Error;
};

class NoPathError : public Error {
public:
  using Error::Error;
};

/// Stage-1 clustering produced nothing to attach noise flows to.
class NoClustersError : public Error {
public:
  using Error::Error;
};

/// Cross-reference failure between pipeline stages (e.g. a flow without an FOF).
class IntegrityError : public Error {
public:
  using Error::Error;
};

} // namespace nlof

namespace nlof {

/// Pipeline failure tagged with the stage that raised it: "<stage>: <cause>".
class StageError : public Error {
public:
  StageError(std::string stage, const std::string& cause)
      : Error(stage + ": " + cause), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

private:
  std::string stage_;
};

} // namespace nlof
