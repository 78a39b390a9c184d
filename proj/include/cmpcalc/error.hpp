#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cmpcalc {

// Malformed or inconsistent input: bad syntax, unknown names, mismatched
// contexts, size gates. The CLI maps these to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& message, std::size_t position)
      : InputError(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Request exceeds an enumeration or representation limit.
class SizeError : public InputError {
 public:
  using InputError::InputError;
};

// Well-formed data that violates a modelling assumption (complex second
// eigenvalue, degenerate clustering, singular system). CLI exit code 3.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ComplexPairError : public ModelError {
 public:
  using ModelError::ModelError;
};

class DegenerateError : public ModelError {
 public:
  using ModelError::ModelError;
};

class NumericalError : public ModelError {
 public:
  using ModelError::ModelError;
};

}  // namespace cmpcalc
