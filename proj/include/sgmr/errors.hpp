#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgmr {

// Malformed input text. line() is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DomainError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class StructuralError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class SizeLimitError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class OverflowError : public std::overflow_error {
  using std::overflow_error::overflow_error;
};

class ContractViolation : public std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace sgmr
