#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdl {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Concrete-syntax error. `position` is a 0-based byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Invalid model: bad relation, unknown world, malformed model file.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Formula used against a model or theory of the wrong language.
class LanguageError : public Error {
 public:
  using Error::Error;
};

/// Malformed derivation file or a transform applied to a rejected derivation.
class DerivationError : public Error {
 public:
  using Error::Error;
};

}  // namespace cdl
