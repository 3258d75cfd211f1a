#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cpwlkit {

/// Raised when a caller violates an operation's precondition
/// (dimension mismatch, empty input, malformed bounds, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the text/JSON/MPS readers. Line and column are 1-based;
/// zero means "unknown".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractError(message);
}

}  // namespace cpwlkit
