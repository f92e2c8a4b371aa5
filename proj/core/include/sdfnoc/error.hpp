#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdfnoc {

/// Base class of every error thrown by the toolchain.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column = 0);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  std::size_t line_;
  std::size_t column_;
};

/// Structural problem with a graph (bad port, duplicate driver, cycle, ...).
class GraphError : public Error {
 public:
  using Error::Error;
};

/// An operator was applied outside its domain, or is missing from the registry.
class OperatorError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class RoutingError : public Error {
 public:
  using Error::Error;
};

class SimulationError : public Error {
 public:
  enum class Kind { Deadlock, UnconfiguredPort, Input };

  SimulationError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace sdfnoc
