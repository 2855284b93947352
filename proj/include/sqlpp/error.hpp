#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sqlpp {

struct SourcePos {
  int line = 0;  // 1-based; 0 = unknown
  int col = 0;
};

// Common base so the CLI can format every engine error as
// "line:col: code: message" and map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, SourcePos pos = {})
      : std::runtime_error(message), code_(std::move(code)), pos_(pos) {}

  const std::string& code() const { return code_; }
  SourcePos pos() const { return pos_; }

 private:
  std::string code_;
  SourcePos pos_;
};

class LexError : public Error {
 public:
  LexError(const std::string& message, SourcePos pos)
      : Error("LexError", message, pos) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, SourcePos pos)
      : Error("ParseError", message, pos) {}
  ParseError(std::string code, const std::string& message, SourcePos pos)
      : Error(std::move(code), message, pos) {}
};

// Registry violations and unknown profiles/macros.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Errors raised while rewriting sugar forms into the core language.
class DesugarError : public Error {
 public:
  using Error::Error;
};

enum class EvalCode {
  NavError,
  TypeMismatch,
  CoercionError,
  NotAString,
  NonBooleanCondition,
  FeatureGated,
  BagOrderError,
  LimitNotInt,
  UnsupportedSetOp,
  DivideByZero,
  DuplicateAttribute,
};

std::string_view eval_code_name(EvalCode code);

class EvalError : public Error {
 public:
  EvalError(EvalCode code, const std::string& message, SourcePos pos = {})
      : Error(std::string(eval_code_name(code)), message, pos),
        eval_code_(code) {}

  EvalCode eval_code() const { return eval_code_; }

 private:
  EvalCode eval_code_;
};

}  // namespace sqlpp
