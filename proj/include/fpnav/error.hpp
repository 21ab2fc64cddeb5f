#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace fpnav {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text (JSON syntax, instruction grammar, CLI values).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a data-model invariant. Carries the
// offending region id when one applies.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what, std::optional<int> region_id = std::nullopt)
      : Error(what), region_id_(region_id) {}

  std::optional<int> region_id() const { return region_id_; }

 private:
  std::optional<int> region_id_;
};

// Precondition violations at simulation/evaluation time.
class StateError : public Error {
 public:
  using Error::Error;
};

}  // namespace fpnav
