#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xtc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text input that does not follow a grammar. Line/column are 1-based, 0 if unknown.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, std::size_t line = 0, std::size_t column = 0)
      : Error(format(msg, line, column)), message_(msg), line_(line), column_(column) {}
  const std::string& message() const { return message_; }  // without the position prefix
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& msg, std::size_t line, std::size_t column) {
    if (line == 0) return msg;
    std::string s = "line " + std::to_string(line);
    if (column) s += ", column " + std::to_string(column);
    return s + ": " + msg;
  }
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

class SemanticError : public Error {
 public:
  SemanticError(const std::string& msg, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

#define XTC_ERROR(Name)                  \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  };

XTC_ERROR(UnknownSymbol)
XTC_ERROR(InvalidAddress)
XTC_ERROR(StateCapExceeded)
XTC_ERROR(UnboundVariable)
XTC_ERROR(BoxTooLarge)
XTC_ERROR(EmptyLanguage)
XTC_ERROR(MalformedTree)
XTC_ERROR(NotApplicable)
XTC_ERROR(BoundsTooLarge)
XTC_ERROR(DegreeViolation)
XTC_ERROR(WidthTooSmall)
XTC_ERROR(StateSpaceTooLarge)
XTC_ERROR(NoApplicableAlgorithm)

#undef XTC_ERROR

}  // namespace xtc
