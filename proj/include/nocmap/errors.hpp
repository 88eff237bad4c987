#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nocmap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range coordinates, unknown identifiers, bad argument values.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Operation requires state that is not present (e.g. an unmapped endpoint).
class StateError : public Error {
 public:
  using Error::Error;
};

/// Broken caller contract (duplicate route key, incompatible binding, ...).
class LogicError : public Error {
 public:
  using Error::Error;
};

/// Platform or scenario cannot be simulated.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text; carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class ValidationReason {
  CyclicGraph,
  MultipleRoots,
  NoRoot,
  UnknownTask,
  DuplicateTask,
  DuplicateEdge,
  SelfEdge,
  BadVolume,
  BadInstructions,
  BadKind,
};

[[nodiscard]] const char* to_string(ValidationReason reason);

/// A task graph or workload violates a structural rule.
class ValidationError : public Error {
 public:
  ValidationError(ValidationReason reason, const std::string& detail)
      : Error(std::string(to_string(reason)) + (detail.empty() ? "" : ": " + detail)),
        reason_(reason) {}
  [[nodiscard]] ValidationReason reason() const { return reason_; }

 private:
  ValidationReason reason_;
};

/// The event loop reached a state with pending work and no way to progress.
class SimulationError : public Error {
 public:
  using Error::Error;
};

}  // namespace nocmap
