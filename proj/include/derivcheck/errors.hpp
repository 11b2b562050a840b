#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace derivcheck {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Equation syntax error. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A product of two unknowns, or an unknown in a divisor.
class NonlinearInUnknowns : public Error {
 public:
  using Error::Error;
};

class DivideByZero : public Error {
 public:
  using Error::Error;
};

class MissingSlot : public Error {
 public:
  explicit MissingSlot(char slot) : Error(std::string("slot ") + slot + " has no value"), slot_(slot) {}
  char slot() const noexcept { return slot_; }

 private:
  char slot_;
};

// Too many slots/unknowns for renaming, or for k! mapping enumeration.
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

class InconclusiveBudgetExhausted : public Error {
 public:
  using Error::Error;
};

// Malformed corpus / prediction / task record. Line is 1-based, 0 when unknown.
class CorpusError : public Error {
 public:
  CorpusError(const std::string& message, std::size_t line, std::string field = {})
      : Error((line ? "line " + std::to_string(line) + ": " : std::string()) +
              (field.empty() ? std::string() : "field '" + field + "': ") + message),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class MissingAnnotation : public Error {
 public:
  using Error::Error;
};

class UncoveredLiteral : public Error {
 public:
  using Error::Error;
};

// Rejected human decision; the message is the reason shown to the annotator.
class DecisionError : public Error {
 public:
  using Error::Error;
};

}  // namespace derivcheck
