#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dunkl {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or violated preconditions.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed expression source; `position` is a 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Scenario file does not satisfy the schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace dunkl
