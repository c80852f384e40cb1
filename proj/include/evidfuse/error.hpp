#pragma once

#include <stdexcept>
#include <string>

namespace evidfuse {

enum class ErrorKind {
  DuplicateLabel,
  EmptyLabel,
  TooFewLabels,
  TooManyLabels,
  EmptySetMass,
  NegativeMass,
  NotNormalized,
  FrameMismatch,
  UnknownLabel,
  OutOfRange,
  InvalidConfig,
  Parse,
  TotalConflict,
  VanishingConsensus,
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DuplicateLabel: return "duplicate label";
    case ErrorKind::EmptyLabel: return "empty label";
    case ErrorKind::TooFewLabels: return "frame needs at least 2 labels";
    case ErrorKind::TooManyLabels: return "frame exceeds 16 labels";
    case ErrorKind::EmptySetMass: return "mass on empty set";
    case ErrorKind::NegativeMass: return "negative mass";
    case ErrorKind::NotNormalized: return "masses do not sum to 1";
    case ErrorKind::FrameMismatch: return "frame mismatch";
    case ErrorKind::UnknownLabel: return "unknown label";
    case ErrorKind::OutOfRange: return "value outside [0,1]";
    case ErrorKind::InvalidConfig: return "invalid configuration";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::TotalConflict: return "total conflict";
    case ErrorKind::VanishingConsensus: return "vanishing consensus";
  }
  return "error";
}

/// Degenerate fusion outcomes, as opposed to bad input.
constexpr bool is_degenerate(ErrorKind kind) noexcept {
  return kind == ErrorKind::TotalConflict || kind == ErrorKind::VanishingConsensus;
}

/// The single exception type thrown by the library. The kind is preserved when
/// an error is re-thrown with extra context (scan, run, rule).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + (detail.empty() ? "" : ": " + detail)),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Same kind, message prefixed by `context`.
  Error with_context(const std::string& context) const {
    return Error(kind_, context, what());
  }

 private:
  Error(ErrorKind kind, const std::string& context, const char* what)
      : std::runtime_error(context + ": " + what), kind_(kind) {}

  ErrorKind kind_;
};

}  // namespace evidfuse
