#pragma once

#include <stdexcept>
#include <string>

namespace hors {

// code 2: rejected input; code 3: an internal invariant was violated.
struct Error : std::runtime_error {
  int exitCode;
  explicit Error(const std::string& msg, int code = 2) : std::runtime_error(msg), exitCode(code) {}
};

struct ParseError : Error {
  int line, column;
  ParseError(const std::string& msg, int line_, int column_)
      : Error(std::to_string(line_) + ":" + std::to_string(column_) + ": " + msg), line(line_), column(column_) {}
};

struct ValidationError : Error {
  using Error::Error;
};

struct UnboundName : ValidationError {
  explicit UnboundName(const std::string& name) : ValidationError("unbound name: " + name) {}
};
struct TypeMismatch : ValidationError {
  using ValidationError::ValidationError;
};
struct ArityMismatch : ValidationError {
  using ValidationError::ValidationError;
};

struct MissingTransition : ValidationError {
  using ValidationError::ValidationError;
};
struct DirectionOutOfRange : ValidationError {
  using ValidationError::ValidationError;
};
struct ArityExceedsMax : ValidationError {
  using ValidationError::ValidationError;
};

struct NotSimpleForm : Error {
  explicit NotSimpleForm(const std::string& msg) : Error(msg, 3) {}
};
struct NotParityScheme : Error {
  using Error::Error;
};
struct NodeConstructorInPr : Error {
  explicit NodeConstructorInPr(const std::string& msg) : Error(msg, 3) {}
};

struct UnproductiveCycle : Error {
  using Error::Error;
};
struct ChildlessConstructor : Error {
  using Error::Error;
};
struct TooLarge : Error {
  using Error::Error;
};
struct FreeVariable : Error {
  explicit FreeVariable(const std::string& msg) : Error(msg, 3) {}
};
struct UnboundVariable : Error {
  explicit UnboundVariable(const std::string& msg) : Error(msg, 3) {}
};

}  // namespace hors
