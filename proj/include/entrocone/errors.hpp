#pragma once

#include <stdexcept>
#include <string>

namespace entrocone {

/// Mismatched or out-of-range sizes (atom counts, partition sizes).
struct SizeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Wrong number of variables for a fixed-arity functional (e.g. Ingleton needs 4).
struct ArityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An enumeration backend was asked for more than it is allowed to do.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A distribution lacks the full support a coordinate system requires.
struct SupportError : std::domain_error {
  using std::domain_error::domain_error;
};

struct SamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace entrocone
