#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace genadapt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated structural precondition: unknown ids, malformed paths, mismatched
// request sets. Indicates a caller bug rather than bad user input.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value (generator sizes, GP parameters, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Formula text that does not follow the grammar. `offset` is the byte
// position in the input where parsing stopped.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Line-oriented file (edge list, knowledge base) with a bad line. Lines are
// 1-based.
class FileFormatError : public Error {
 public:
  FileFormatError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line), detail_(what) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

// Scenario validation failure naming the offending field.
class ScenarioError : public Error {
 public:
  ScenarioError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace genadapt
