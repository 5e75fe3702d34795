#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace csl {

/// Every failure raised by the library carries one of these kinds; the CLI
/// maps them onto exit codes and prints the kind name.
enum class ErrorKind {
  EmptySet,
  SingletonSet,
  NonCoprime,
  NonPositiveElement,
  DomainError,
  TooLarge,
  NotBlockAligned,
  BadParameters,
  OutOfRange,
  ConvergenceFailure,
  EmptySeries,
  CapacityOutOfRange,
  SamplerStuck,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::SingletonSet: return "SingletonSet";
    case ErrorKind::NonCoprime: return "NonCoprime";
    case ErrorKind::NonPositiveElement: return "NonPositiveElement";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotBlockAligned: return "NotBlockAligned";
    case ErrorKind::BadParameters: return "BadParameters";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::CapacityOutOfRange: return "CapacityOutOfRange";
    case ErrorKind::SamplerStuck: return "SamplerStuck";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  /// True for errors caused by bad input rather than by a failed computation.
  [[nodiscard]] bool is_usage_error() const noexcept {
    switch (kind_) {
      case ErrorKind::ConvergenceFailure:
      case ErrorKind::SamplerStuck:
        return false;
      default:
        return true;
    }
  }

 private:
  ErrorKind kind_;
};

}  // namespace csl
