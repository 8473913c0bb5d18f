#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chainscope {

enum class ErrorKind {
  UnknownCountry,
  UnknownSectorLabel,
  ZeroTurnover,
  InvalidArgument,
  SchemaError,
  DanglingReference,
  DuplicateId,
  InvalidSize,
  TaxonomyError,
  CycleDetected,
  MissingTerminal,
  EmptyInput,
  UnsupportedFormat,
  ParseError,
  GraphTooLarge,
  Disconnected,
  TooSmall,
  AxisOutOfRange,
  InsufficientTable,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library. The kind mirrors
/// the named error conditions of each operation so callers can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace chainscope
