#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coarrest {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or missing input. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

// Input was well formed but an analysis cannot be carried out (exit code 1).
class AnalysisError : public Error {
 public:
  using Error::Error;
};

}  // namespace coarrest
