#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acgs {

// Raised for structural problems in a model (unknown names, missing transitions).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A coalition formula was checked on a model containing an agent with
// imperfect information and perfect recall. Synthesis is undecidable there.
class UndecidableConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested backend cannot handle the given coalition body.
class AlgorithmInapplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The enumeration backend refused because too many strategy pairs exist.
class StrategySpaceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace acgs
